#include "qdcor/cli_commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "qdcor/asymptotics.hpp"
#include "qdcor/errors.hpp"
#include "qdcor/montecarlo.hpp"
#include "qdcor/version.hpp"

namespace qdcor::cli {

namespace {

// Shortest representation that parses back to the same double, up to the
// full 17 significant digits.
std::string fmt(double x) {
    char buf[40];
    for (int digits = 15; digits <= 17; ++digits) {
        std::snprintf(buf, sizeof(buf), "%.*g", digits, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

std::string fmt_pct(double corr) {
    return std::to_string(static_cast<long long>(std::llround(100.0 * corr)));
}

QuantileKind parse_quantile(const std::string& s) {
    if (s == "sample") return QuantileKind::SampleQuantile;
    if (s == "locscale") return QuantileKind::LocScaleUnknownMean;
    if (s == "locscale-known") return QuantileKind::LocScaleKnownMean;
    throw std::invalid_argument("unknown quantile kind: " + s);
}

DispersionKind parse_dispersion(const std::string& s, int abs_r) {
    if (s == "variance") return DispersionKind::variance();
    if (s == "mad") return DispersionKind::mad();
    if (s == "medianad") return DispersionKind::median_ad();
    if (s == "absmoment") return DispersionKind::abs_central_moment(abs_r);
    throw std::invalid_argument("unknown dispersion kind: " + s);
}

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += " ";
        out += v[i];
    }
    return out;
}

template <typename T>
std::string join_num(const std::vector<T>& v) {
    std::ostringstream out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out << " ";
        if constexpr (std::is_floating_point_v<T>)
            out << fmt(v[i]);
        else
            out << v[i];
    }
    return out.str();
}

std::string dist_flags(const DistOptions& d) {
    std::string s = "--dist " + d.dist;
    if (d.dist == "student") s += " --nu " + fmt(d.nu);
    if (d.dist == "custom") s += " --custom-file " + d.custom_path;
    s += " --mu " + fmt(d.mu) + " --sigma " + fmt(d.sigma);
    return s;
}

// Piecewise-linear interpolant over a tabulated grid; clamps outside.
struct LinearTable {
    std::vector<double> x, y;
    double left, right;

    double operator()(double v) const {
        if (v <= x.front()) return left;
        if (v >= x.back()) return right;
        const auto it = std::upper_bound(x.begin(), x.end(), v);
        const std::size_t i = static_cast<std::size_t>(it - x.begin());
        const double t = (v - x[i - 1]) / (x[i] - x[i - 1]);
        return y[i - 1] + t * (y[i] - y[i - 1]);
    }
};

CustomSpec load_custom(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open custom descriptor: " + path);
    nlohmann::json j;
    in >> j;
    auto xs = j.at("x").get<std::vector<double>>();
    auto cdf = j.at("cdf").get<std::vector<double>>();
    auto pdf = j.at("pdf").get<std::vector<double>>();
    if (xs.size() < 2 || xs.size() != cdf.size() || xs.size() != pdf.size())
        throw std::invalid_argument("custom descriptor: x/cdf/pdf must share length >= 2");
    if (!std::is_sorted(xs.begin(), xs.end()) ||
        !std::is_sorted(cdf.begin(), cdf.end()))
        throw std::invalid_argument("custom descriptor: x and cdf must be nondecreasing");
    CustomSpec spec;
    spec.name = j.value("name", std::string("custom"));
    LinearTable ctab{xs, cdf, cdf.front(), cdf.back()};
    LinearTable ptab{xs, pdf, 0.0, 0.0};
    spec.cdf = [ctab](double v) { return ctab(v); };
    spec.pdf = [ptab](double v) { return std::max(0.0, ptab(v)); };
    return spec;
}

struct NamedDistribution {
    std::string label;
    Distribution dist;
};

std::vector<NamedDistribution> curve_distributions(const CurveOptions& opt) {
    std::vector<NamedDistribution> out;
    std::vector<std::string> names = opt.dists;
    if (names.empty()) names = {"gaussian", "student(10)", "student(5)"};
    for (const auto& n : names) {
        if (n == "gaussian") {
            out.push_back({n, Distribution::gaussian()});
        } else if (n.rfind("student(", 0) == 0 && n.back() == ')') {
            const double df = std::stod(n.substr(8, n.size() - 9));
            out.push_back({n, Distribution::student(df)});
        } else if (n == "student") {
            out.push_back({"student(" + fmt(opt.nu) + ")",
                           Distribution::student(opt.nu)});
        } else if (n == "custom") {
            out.push_back({"custom",
                           Distribution::custom(load_custom(opt.custom_path))});
        } else {
            throw std::invalid_argument("unknown curve distribution: " + n);
        }
    }
    return out;
}

}  // namespace

void RunManifest::write_header(std::ostream& out) const {
    out << "# qdcor " << kVersion << "\n";
    out << "# command: " << command << " " << parameters << "\n";
    if (has_seed) out << "# seed: " << seed << "\n";
    out << "# output: " << output << "\n";
}

Distribution make_distribution(const DistOptions& d) {
    if (d.dist == "gaussian") return Distribution::gaussian(d.mu, d.sigma);
    if (d.dist == "student") return Distribution::student(d.nu, d.mu, d.sigma);
    if (d.dist == "custom")
        return Distribution::custom(load_custom(d.custom_path), d.mu, d.sigma);
    throw std::invalid_argument("unknown distribution: " + d.dist);
}

int run_theory(const TheoryOptions& opt, std::ostream& out) {
    const Distribution dist = make_distribution(opt.dist);
    RunManifest manifest;
    manifest.command = "theory";
    manifest.parameters = dist_flags(opt.dist) + " --quantile " +
                          join(opt.quantiles) + " --dispersion " +
                          join(opt.dispersions) + " --p " + join_num(opt.ps) +
                          " --abs-moment-r " + std::to_string(opt.abs_moment_r) +
                          " --out " + opt.out;
    manifest.output = opt.out;
    manifest.write_header(out);
    out << "dist,quantile,dispersion,p,cov11,cov12,cov22,corr,corr_pct,theorem,"
           "conditions\n";

    bool any_na = false;
    for (const auto& qname : opt.quantiles) {
        for (const auto& dname : opt.dispersions) {
            for (double p : opt.ps) {
                EstimatorPairSpec spec;
                spec.quantile_kind = parse_quantile(qname);
                spec.p = p;
                spec.dispersion = parse_dispersion(dname, opt.abs_moment_r);
                const auto report = validate_conditions(dist, spec);
                out << dist.name() << "," << qname << "," << dname << ","
                    << fmt(p) << ",";
                try {
                    const AsymptoticResult res = asymptotic_for_pair(dist, spec);
                    out << fmt(res.cov(0, 0)) << "," << fmt(res.cov(0, 1)) << ","
                        << fmt(res.cov(1, 1)) << "," << fmt(res.corr) << ","
                        << fmt_pct(res.corr) << "," << res.theorem;
                } catch (const MomentUnavailable&) {
                    any_na = true;
                    out << "NA,NA,NA,NA,NA,NA";
                }
                out << "," << report.to_string() << "\n";
            }
        }
    }
    return any_na ? 3 : 0;
}

int run_curve(const CurveOptions& opt, std::ostream& out) {
    if (!(opt.p_step > 0.0) || !(opt.p_min > 0.0) || !(opt.p_max < 1.0) ||
        opt.p_min > opt.p_max)
        throw std::invalid_argument("curve: bad p grid");
    RunManifest manifest;
    manifest.command = "curve";
    manifest.parameters =
        (opt.dists.empty() ? std::string("--dist default")
                           : "--dist " + join(opt.dists)) +
        " --quantile " + join(opt.quantiles) + " --dispersion " +
        join(opt.dispersions) + " --pmin " + fmt(opt.p_min) + " --pmax " +
        fmt(opt.p_max) + " --pstep " + fmt(opt.p_step) + " --out " + opt.out;
    manifest.output = opt.out;
    manifest.write_header(out);
    out << "dist,quantile,dispersion,p,corr\n";

    bool any_na = false;
    const auto dists = curve_distributions(opt);
    for (const auto& nd : dists) {
        for (const auto& qname : opt.quantiles) {
            for (const auto& dname : opt.dispersions) {
                // Fixed-count loop keeps the grid exact at both ends.
                const auto steps = static_cast<long>(
                    std::llround((opt.p_max - opt.p_min) / opt.p_step));
                for (long i = 0; i <= steps; ++i) {
                    const double p = opt.p_min + static_cast<double>(i) * opt.p_step;
                    EstimatorPairSpec spec;
                    spec.quantile_kind = parse_quantile(qname);
                    spec.p = p;
                    spec.dispersion = parse_dispersion(dname, 3);
                    out << nd.label << "," << qname << "," << dname << ","
                        << fmt(p) << ",";
                    try {
                        out << fmt(asymptotic_for_pair(nd.dist, spec).corr);
                    } catch (const MomentUnavailable&) {
                        any_na = true;
                        out << "NA";
                    }
                    out << "\n";
                }
            }
        }
    }
    return any_na ? 3 : 0;
}

int run_simulate(const SimulateOptions& opt, std::ostream& out) {
    const Distribution dist = make_distribution(opt.dist);
    RunManifest manifest;
    manifest.command = "simulate";
    manifest.parameters = dist_flags(opt.dist) + " --quantile " +
                          join(opt.quantiles) + " --dispersion " +
                          join(opt.dispersions) + " --p " + fmt(opt.p) +
                          " --n " + join_num(opt.ns) + " --l " +
                          std::to_string(opt.l) + " --reps " +
                          std::to_string(opt.reps) + " --v " +
                          std::to_string(opt.v) + " --w " +
                          std::to_string(opt.w) + " --seed " +
                          std::to_string(opt.seed) + " --out " + opt.out;
    manifest.seed = opt.seed;
    manifest.has_seed = true;
    manifest.output = opt.out;
    manifest.write_header(out);
    out << "dist,quantile,dispersion,p,n,l,v,w,reps,seed,mean_corr,emp_lo,"
           "emp_hi,theoretical,fisher_lo,fisher_hi\n";

    for (const auto& qname : opt.quantiles) {
        for (const auto& dname : opt.dispersions) {
            for (int n : opt.ns) {
                SimulationConfig config;
                config.dist = dist;
                config.spec.quantile_kind = parse_quantile(qname);
                config.spec.p = opt.p;
                config.spec.dispersion = parse_dispersion(dname, 3);
                config.n = n;
                config.l = opt.l;
                config.reps = opt.reps;
                config.seed = opt.seed;
                config.v = opt.v;
                config.w = opt.w;
                config.max_threads = opt.threads;
                const SimulationSummary s = run_experiment(config);
                out << dist.name() << "," << qname << "," << dname << ","
                    << fmt(opt.p) << "," << n << "," << opt.l << "," << opt.v
                    << "," << opt.w << "," << s.reps_used << "," << opt.seed
                    << "," << fmt(s.mean_corr) << "," << fmt(s.empirical_ci.first)
                    << "," << fmt(s.empirical_ci.second) << ",";
                if (s.theoretical_corr) {
                    out << fmt(*s.theoretical_corr) << ","
                        << fmt(s.fisher_ci->first) << ","
                        << fmt(s.fisher_ci->second);
                } else {
                    out << "NA,NA,NA";
                }
                out << "\n";
            }
        }
    }
    return 0;
}

int run_scaling(const ScalingOptions& opt, std::ostream& out) {
    const Distribution dist = make_distribution(opt.dist);
    RunManifest manifest;
    manifest.command = "scaling";
    manifest.parameters = dist_flags(opt.dist) + " --quantile " + opt.quantile +
                          " --dispersion " + opt.dispersion + " --p " +
                          fmt(opt.p) + " --v " + join_num(opt.vs) + " --w " +
                          join_num(opt.ws) +
                          (opt.verify ? std::string(" --verify") : "") +
                          " --n " + std::to_string(opt.n) + " --l " +
                          std::to_string(opt.l) + " --reps " +
                          std::to_string(opt.reps) + " --seed " +
                          std::to_string(opt.seed) + " --out " + opt.out;
    manifest.seed = opt.seed;
    manifest.has_seed = true;
    manifest.output = opt.out;
    manifest.write_header(out);
    out << "v,w,base_corr,scaled_corr,corr_ratio,cov_factor";
    if (opt.verify) out << ",mc_corr,mc_ratio";
    out << "\n";

    EstimatorPairSpec spec;
    spec.quantile_kind = parse_quantile(opt.quantile);
    spec.p = opt.p;
    spec.dispersion = parse_dispersion(opt.dispersion, 3);
    const AsymptoticResult base = asymptotic_for_pair(dist, spec);

    double mc_base = 0.0;
    if (opt.verify) {
        SimulationConfig config{dist, spec, opt.n,    opt.l, opt.reps,
                                opt.seed, 1,   1,     opt.threads};
        mc_base = run_experiment(config).mean_corr;
    }
    for (int v : opt.vs) {
        for (int w : opt.ws) {
            const AsymptoticResult scaled = scale_for_sample_sizes(base, v, w);
            const double ratio = std::sqrt(static_cast<double>(std::min(v, w)) /
                                           static_cast<double>(std::max(v, w)));
            out << v << "," << w << "," << fmt(base.corr) << ","
                << fmt(scaled.corr) << "," << fmt(ratio) << ","
                << fmt(1.0 / static_cast<double>(std::max(v, w)));
            if (opt.verify) {
                SimulationConfig config{dist, spec, opt.n,    opt.l, opt.reps,
                                        opt.seed, v,   w,     opt.threads};
                const double mc = run_experiment(config).mean_corr;
                out << "," << fmt(mc) << ","
                    << fmt(mc_base != 0.0 ? mc / mc_base : 0.0);
            }
            out << "\n";
        }
    }
    return 0;
}

}  // namespace qdcor::cli
