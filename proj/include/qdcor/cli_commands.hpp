#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "qdcor/distributions.hpp"

namespace qdcor::cli {

/// Echoed at the top of every CSV as '#'-prefixed header lines, so a file
/// records exactly how to reproduce itself.
struct RunManifest {
    std::string command;     // subcommand name
    std::string parameters;  // canonical flag string
    std::uint64_t seed = 0;
    bool has_seed = false;
    std::string output = "-";

    void write_header(std::ostream& out) const;
};

/// Distribution selection shared by all subcommands. `custom_path` points to
/// a JSON descriptor {"name":..., "x":[...], "cdf":[...], "pdf":[...]} with
/// piecewise-linear (monotone) interpolation; mu/sigma shift and scale it.
struct DistOptions {
    std::string dist = "gaussian";  // gaussian | student | custom
    double nu = 5.0;
    double mu = 0.0;
    double sigma = 1.0;
    std::string custom_path;
};

Distribution make_distribution(const DistOptions& d);

struct TheoryOptions {
    DistOptions dist;
    std::vector<double> ps{0.95};
    std::vector<std::string> quantiles{"sample"};  // sample|locscale|locscale-known
    std::vector<std::string> dispersions{"variance", "mad", "medianad"};
    int abs_moment_r = 3;  // r used when a dispersion entry is "absmoment"
    std::string out = "-";
};

struct CurveOptions {
    std::vector<std::string> dists;  // empty = gaussian, student(10), student(5)
    double nu = 5.0;
    std::string custom_path;
    std::vector<std::string> quantiles{"sample", "locscale", "locscale-known"};
    std::vector<std::string> dispersions{"variance", "mad", "medianad"};
    double p_min = 0.005;
    double p_max = 0.995;
    double p_step = 0.005;
    std::string out = "-";
};

struct SimulateOptions {
    DistOptions dist;
    double p = 0.95;
    std::vector<int> ns{126, 252, 504, 1008};
    int l = 50;
    int reps = 1000;
    std::uint64_t seed = 42;
    std::vector<std::string> quantiles{"sample"};
    std::vector<std::string> dispersions{"variance", "mad", "medianad"};
    int v = 1;
    int w = 1;
    int threads = 0;
    std::string out = "-";
};

struct ScalingOptions {
    DistOptions dist;
    double p = 0.95;
    std::string quantile = "sample";
    std::string dispersion = "variance";
    std::vector<int> vs{1};
    std::vector<int> ws{1};
    bool verify = false;
    int n = 252;
    int l = 50;
    int reps = 200;
    std::uint64_t seed = 42;
    int threads = 0;
    std::string out = "-";
};

// Each command writes its CSV (manifest header + rows) to `out` and returns
// the process exit code: 0 ok, 3 when any theoretical cell was NA.
// Usage errors (exit 2) and degenerate configs (exit 4) surface as exceptions
// for the front end to map.
int run_theory(const TheoryOptions& opt, std::ostream& out);
int run_curve(const CurveOptions& opt, std::ostream& out);
int run_simulate(const SimulateOptions& opt, std::ostream& out);
int run_scaling(const ScalingOptions& opt, std::ostream& out);

}  // namespace qdcor::cli
