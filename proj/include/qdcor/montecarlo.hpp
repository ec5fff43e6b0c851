#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qdcor/asymptotics.hpp"
#include "qdcor/distributions.hpp"

namespace qdcor {

/// One Monte Carlo experiment: l disjoint windows per replication, the two
/// estimators evaluated per window, their sample Pearson correlation per
/// replication, repeated `reps` times. v and w multiply the window sizes of
/// the quantile and dispersion estimator respectively (the shorter-sample
/// estimator reuses the leading points of the max(v,w)*n window).
struct SimulationConfig {
    Distribution dist = Distribution::gaussian();
    EstimatorPairSpec spec;
    int n = 252;
    int l = 50;
    int reps = 1000;
    std::uint64_t seed = 0;
    int v = 1;
    int w = 1;
    /// 0 = hardware concurrency. Replications are merged in index order, so
    /// the result is byte-identical whatever the thread count.
    int max_threads = 0;
};

struct SimulationSummary {
    double mean_corr = 0.0;
    std::pair<double, double> empirical_ci{0.0, 0.0};
    std::optional<double> theoretical_corr;
    std::optional<std::pair<double, double>> fisher_ci;
    int reps_used = 0;
};

/// Estimator series for one replication: (quantile series, dispersion series),
/// each of length l. Deterministic in (config.seed, replication_index).
std::pair<Eigen::VectorXd, Eigen::VectorXd> simulate_series(
    const SimulationConfig& config, int replication_index);

/// Product-moment correlation; requires equal lengths >= 3 and throws
/// DegenerateSeries when either series is constant.
double pearson_correlation(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys);

/// Fisher-transform confidence interval for a correlation estimated from l
/// points: tanh(atanh(rho) -+ z_{(1+level)/2}/sqrt(l-3)). |rho| = 1 collapses
/// to the degenerate interval (rho, rho).
std::pair<double, double> fisher_ci(double rho, int l, double level);

/// Runs the full experiment; theoretical_corr comes from the matching
/// closed-form result (scaled by sqrt(min(v,w)/max(v,w)) when v != w) and is
/// left empty when the required moments do not exist.
SimulationSummary run_experiment(const SimulationConfig& config);

/// Linear-interpolation order-statistic percentile of `values` at q in [0,1].
double percentile(std::vector<double> values, double q);

}  // namespace qdcor
