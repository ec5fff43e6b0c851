#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>

#include <json.hpp>

#include "qdcor/cli_commands.hpp"
#include "qdcor/errors.hpp"
#include "qdcor/version.hpp"

namespace {

using nlohmann::json;

// --config <file> supplies defaults whose keys mirror the flag names
// (without the leading dashes); flags given on the command line win.
json load_config(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            std::ifstream in(argv[i + 1]);
            if (!in) throw std::invalid_argument(std::string("cannot open config: ") + argv[i + 1]);
            json j;
            in >> j;
            return j;
        }
    }
    return json::object();
}

template <typename T>
void from_config(const json& j, const char* key, T& target) {
    if (j.contains(key)) target = j.at(key).get<T>();
}

void add_dist_flags(CLI::App* cmd, qdcor::cli::DistOptions& d) {
    cmd->add_option("--dist", d.dist, "gaussian | student | custom");
    cmd->add_option("--nu", d.nu, "Student degrees of freedom (> 2)");
    cmd->add_option("--mu", d.mu, "location");
    cmd->add_option("--sigma", d.sigma, "scale (> 0)");
    cmd->add_option("--custom-file", d.custom_path,
                    "JSON descriptor for --dist custom");
}

void apply_dist_config(const json& j, qdcor::cli::DistOptions& d) {
    from_config(j, "dist", d.dist);
    from_config(j, "nu", d.nu);
    from_config(j, "mu", d.mu);
    from_config(j, "sigma", d.sigma);
    from_config(j, "custom-file", d.custom_path);
}

int write_and_run(const std::string& out_path,
                  const std::function<int(std::ostream&)>& run) {
    if (out_path == "-") return run(std::cout);
    std::ofstream file(out_path, std::ios::binary);
    if (!file) throw std::invalid_argument("cannot open output file: " + out_path);
    return run(file);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Asymptotic correlations between quantile and dispersion "
                 "estimators, with a Monte Carlo verification harness"};
    app.set_version_flag("--version", qdcor::kVersion);
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path,
                   "JSON file with defaults (keys mirror the flags)");

    json cfg;
    try {
        cfg = load_config(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    qdcor::cli::TheoryOptions theory;
    qdcor::cli::CurveOptions curve;
    qdcor::cli::SimulateOptions simulate;
    qdcor::cli::ScalingOptions scaling;

    apply_dist_config(cfg, theory.dist);
    apply_dist_config(cfg, simulate.dist);
    apply_dist_config(cfg, scaling.dist);
    from_config(cfg, "p", theory.ps);
    from_config(cfg, "quantile", theory.quantiles);
    from_config(cfg, "dispersion", theory.dispersions);
    from_config(cfg, "n", simulate.ns);
    from_config(cfg, "l", simulate.l);
    from_config(cfg, "reps", simulate.reps);
    from_config(cfg, "seed", simulate.seed);

    auto* theory_cmd =
        app.add_subcommand("theory", "closed-form covariance/correlation rows");
    theory_cmd->fallthrough();
    add_dist_flags(theory_cmd, theory.dist);
    theory_cmd->add_option("--p", theory.ps, "quantile orders");
    theory_cmd->add_option("--quantile", theory.quantiles,
                           "sample | locscale | locscale-known");
    theory_cmd->add_option("--dispersion", theory.dispersions,
                           "variance | mad | medianad | absmoment");
    theory_cmd->add_option("--abs-moment-r", theory.abs_moment_r,
                           "order r for absmoment");
    theory_cmd->add_option("--out", theory.out, "output path (- = stdout)");

    auto* curve_cmd = app.add_subcommand(
        "curve", "correlation-vs-p grid for plotting, long CSV");
    curve_cmd->fallthrough();
    curve_cmd->add_option("--dist", curve.dists,
                          "gaussian | student | student(df) | custom; default "
                          "gaussian student(10) student(5)");
    curve_cmd->add_option("--nu", curve.nu, "df used for plain 'student'");
    curve_cmd->add_option("--custom-file", curve.custom_path,
                          "JSON descriptor for custom");
    curve_cmd->add_option("--quantile", curve.quantiles,
                          "sample | locscale | locscale-known");
    curve_cmd->add_option("--dispersion", curve.dispersions,
                          "variance | mad | medianad");
    curve_cmd->add_option("--pmin", curve.p_min, "grid start");
    curve_cmd->add_option("--pmax", curve.p_max, "grid end");
    curve_cmd->add_option("--pstep", curve.p_step, "grid step");
    curve_cmd->add_option("--out", curve.out, "output path (- = stdout)");

    auto* sim_cmd = app.add_subcommand(
        "simulate", "Monte Carlo replication of the window protocol");
    sim_cmd->fallthrough();
    add_dist_flags(sim_cmd, simulate.dist);
    sim_cmd->add_option("--p", simulate.p, "quantile order");
    sim_cmd->add_option("--n", simulate.ns, "window sizes");
    sim_cmd->add_option("--l", simulate.l, "windows per correlation estimate");
    sim_cmd->add_option("--reps", simulate.reps, "replications");
    sim_cmd->add_option("--seed", simulate.seed, "master seed");
    sim_cmd->add_option("--quantile", simulate.quantiles,
                        "sample | locscale | locscale-known");
    sim_cmd->add_option("--dispersion", simulate.dispersions,
                        "variance | mad | medianad");
    sim_cmd->add_option("--v", simulate.v, "quantile sample-size multiplier");
    sim_cmd->add_option("--w", simulate.w, "dispersion sample-size multiplier");
    sim_cmd->add_option("--threads", simulate.threads, "0 = hardware");
    sim_cmd->add_option("--out", simulate.out, "output path (- = stdout)");

    auto* scale_cmd =
        app.add_subcommand("scaling", "sample-size scaling law table");
    scale_cmd->fallthrough();
    add_dist_flags(scale_cmd, scaling.dist);
    scale_cmd->add_option("--p", scaling.p, "quantile order");
    scale_cmd->add_option("--quantile", scaling.quantile,
                          "sample | locscale | locscale-known");
    scale_cmd->add_option("--dispersion", scaling.dispersion,
                          "variance | mad | medianad");
    scale_cmd->add_option("--v", scaling.vs, "quantile multipliers");
    scale_cmd->add_option("--w", scaling.ws, "dispersion multipliers");
    scale_cmd->add_flag("--verify", scaling.verify,
                        "append Monte Carlo estimates");
    scale_cmd->add_option("--n", scaling.n, "window size for --verify");
    scale_cmd->add_option("--l", scaling.l, "windows for --verify");
    scale_cmd->add_option("--reps", scaling.reps, "replications for --verify");
    scale_cmd->add_option("--seed", scaling.seed, "master seed for --verify");
    scale_cmd->add_option("--threads", scaling.threads, "0 = hardware");
    scale_cmd->add_option("--out", scaling.out, "output path (- = stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForVersion")
            return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (theory_cmd->parsed())
            return write_and_run(theory.out, [&](std::ostream& out) {
                return qdcor::cli::run_theory(theory, out);
            });
        if (curve_cmd->parsed())
            return write_and_run(curve.out, [&](std::ostream& out) {
                return qdcor::cli::run_curve(curve, out);
            });
        if (sim_cmd->parsed())
            return write_and_run(simulate.out, [&](std::ostream& out) {
                return qdcor::cli::run_simulate(simulate, out);
            });
        if (scale_cmd->parsed())
            return write_and_run(scaling.out, [&](std::ostream& out) {
                return qdcor::cli::run_scaling(scaling, out);
            });
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const qdcor::DegenerateSeries& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
