#include "qdcor/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "qdcor/errors.hpp"
#include "qdcor/estimators.hpp"
#include "qdcor/rng.hpp"
#include "qdcor/special_functions.hpp"

namespace qdcor {

namespace {

void validate(const SimulationConfig& c) {
    if (c.n < 2) throw std::domain_error("simulation: n must be >= 2");
    if (c.l < 3) throw std::domain_error("simulation: l must be >= 3");
    if (c.reps < 1) throw std::domain_error("simulation: reps must be >= 1");
    if (c.v < 1 || c.w < 1)
        throw std::domain_error("simulation: v, w must be >= 1");
    if (!(c.dist.stddev() > 0.0))
        throw std::domain_error("simulation: degenerate distribution (sigma = 0)");
    if (!(c.spec.p > 0.0 && c.spec.p < 1.0))
        throw std::domain_error("simulation: p must lie in (0,1)");
}

double apply_transform(const TransformSpec& h, double x) {
    switch (h.preset) {
        case TransformSpec::Preset::Identity: return x;
        case TransformSpec::Preset::Negate: return -x;
        case TransformSpec::Preset::Log: return std::log(x);
        case TransformSpec::Preset::Square: return x * x;
        case TransformSpec::Preset::Custom:
            throw std::invalid_argument(
                "simulation: custom (value,derivative) transforms have no "
                "pointwise form; use a preset");
    }
    return x;
}

double quantile_estimate(const Sample& s, const SimulationConfig& c) {
    switch (c.spec.quantile_kind) {
        case QuantileKind::SampleQuantile:
            return sample_quantile(s, c.spec.p);
        case QuantileKind::LocScaleUnknownMean:
            return loc_scale_quantile(s, c.spec.p, c.dist, false);
        case QuantileKind::LocScaleKnownMean:
            return loc_scale_quantile(s, c.spec.p, c.dist, true);
    }
    return 0.0;
}

double dispersion_estimate(const Sample& s, const DispersionKind& d) {
    switch (d.tag) {
        case DispersionKind::Tag::Variance: return sample_variance(s);
        case DispersionKind::Tag::MAD: return sample_mad(s);
        case DispersionKind::Tag::MedianAD: return sample_median_ad(s);
        case DispersionKind::Tag::AbsCentralMoment:
            return abs_central_moment(s, d.r);
    }
    return 0.0;
}

}  // namespace

std::pair<Eigen::VectorXd, Eigen::VectorXd> simulate_series(
    const SimulationConfig& config, int replication_index) {
    validate(config);
    if (replication_index < 0)
        throw std::domain_error("simulation: replication_index must be >= 0");
    const int nq = config.v * config.n;
    const int nd = config.w * config.n;
    const int nmax = std::max(nq, nd);
    Eigen::VectorXd qs(config.l), ds(config.l);
    Eigen::VectorXd window(nmax);
    for (int t = 0; t < config.l; ++t) {
        Substream sub(config.seed, static_cast<std::uint32_t>(replication_index),
                      static_cast<std::uint32_t>(t));
        for (int i = 0; i < nmax; ++i) window[i] = sub.draw(config.dist);
        const Sample sq(window.head(nq));
        const Sample sd(window.head(nd));
        qs[t] = apply_transform(config.spec.h1, quantile_estimate(sq, config));
        ds[t] = apply_transform(config.spec.h2,
                                dispersion_estimate(sd, config.spec.dispersion));
    }
    return {std::move(qs), std::move(ds)};
}

double pearson_correlation(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys) {
    if (xs.size() != ys.size())
        throw std::domain_error("pearson_correlation: length mismatch");
    if (xs.size() < 3)
        throw std::domain_error("pearson_correlation: needs length >= 3");
    const Eigen::ArrayXd dx = xs.array() - xs.mean();
    const Eigen::ArrayXd dy = ys.array() - ys.mean();
    const double sxx = (dx * dx).sum();
    const double syy = (dy * dy).sum();
    if (sxx <= 0.0 || syy <= 0.0)
        throw DegenerateSeries("pearson_correlation: constant series");
    return (dx * dy).sum() / std::sqrt(sxx * syy);
}

std::pair<double, double> fisher_ci(double rho, int l, double level) {
    if (l < 4) throw std::domain_error("fisher_ci: needs l >= 4");
    if (!(level > 0.0 && level < 1.0))
        throw std::domain_error("fisher_ci: level must lie in (0,1)");
    if (std::fabs(rho) >= 1.0) return {rho, rho};
    const double z = std::atanh(rho);
    const double hw =
        sf::normal_quantile(0.5 * (1.0 + level)) / std::sqrt(l - 3.0);
    return {std::tanh(z - hw), std::tanh(z + hw)};
}

double percentile(std::vector<double> values, double q) {
    if (values.empty()) throw std::domain_error("percentile: empty input");
    if (!(q >= 0.0 && q <= 1.0))
        throw std::domain_error("percentile: q must lie in [0,1]");
    std::sort(values.begin(), values.end());
    const double h = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= values.size()) return values.back();
    return values[lo] + (h - lo) * (values[lo + 1] - values[lo]);
}

SimulationSummary run_experiment(const SimulationConfig& config) {
    validate(config);

    SimulationSummary summary;
    try {
        AsymptoticResult theory = asymptotic_for_pair(config.dist, config.spec);
        theory = scale_for_sample_sizes(theory, config.v, config.w);
        summary.theoretical_corr = theory.corr;
        if (config.l >= 4)
            summary.fisher_ci = fisher_ci(theory.corr, config.l, 0.95);
    } catch (const MomentUnavailable&) {
        // Simulation still runs; the theory column stays unavailable.
    }

    std::vector<double> corrs(static_cast<std::size_t>(config.reps));
    std::exception_ptr first_error;
    std::mutex error_mutex;
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const int want = config.max_threads > 0 ? config.max_threads
                                            : static_cast<int>(hw);
    const int n_threads = std::max(1, std::min(want, config.reps));

    auto worker = [&](int first) {
        for (int r = first; r < config.reps; r += n_threads) {
            try {
                const auto [qs, ds] = simulate_series(config, r);
                corrs[static_cast<std::size_t>(r)] = pearson_correlation(qs, ds);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    if (n_threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    double acc = 0.0;
    for (double c : corrs) acc += c;
    summary.mean_corr = acc / static_cast<double>(config.reps);
    summary.empirical_ci = {percentile(corrs, 0.025), percentile(corrs, 0.975)};
    summary.reps_used = config.reps;
    return summary;
}

}  // namespace qdcor
