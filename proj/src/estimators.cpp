#include "qdcor/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace qdcor {

namespace {

std::vector<double> sorted(const Eigen::VectorXd& v) {
    std::vector<double> out(v.data(), v.data() + v.size());
    std::sort(out.begin(), out.end());
    return out;
}

double median_of_sorted(const std::vector<double>& x) {
    const std::size_t n = x.size();
    // 1-based order statistics floor((n+1)/2) and floor((n+2)/2).
    const std::size_t i = (n + 1) / 2;
    const std::size_t j = (n + 2) / 2;
    return 0.5 * (x[i - 1] + x[j - 1]);
}

}  // namespace

Sample::Sample(Eigen::VectorXd values) : values_(std::move(values)) {
    if (values_.size() < 1) throw std::domain_error("Sample: needs n >= 1");
    if (!values_.allFinite())
        throw std::domain_error("Sample: non-finite entries rejected");
}

double sample_quantile(const Sample& s, double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("sample_quantile: p must lie in (0,1)");
    const auto x = sorted(s.values());
    const auto n = static_cast<double>(x.size());
    const auto k = static_cast<std::size_t>(std::ceil(n * p));
    return x[std::max<std::size_t>(k, 1) - 1];
}

double sample_variance(const Sample& s) {
    const Eigen::Index n = s.size();
    if (n < 2) throw std::domain_error("sample_variance: needs n >= 2");
    const double mean = s.values().mean();
    return (s.values().array() - mean).square().sum() / static_cast<double>(n - 1);
}

double sample_mad(const Sample& s) {
    const double mean = s.values().mean();
    return (s.values().array() - mean).abs().sum() /
           static_cast<double>(s.size());
}

double sample_median(const Sample& s) { return median_of_sorted(sorted(s.values())); }

double sample_median_ad(const Sample& s) {
    const double med = sample_median(s);
    std::vector<double> w(static_cast<std::size_t>(s.size()));
    for (Eigen::Index i = 0; i < s.size(); ++i)
        w[static_cast<std::size_t>(i)] = std::fabs(s.values()[i] - med);
    std::sort(w.begin(), w.end());
    return median_of_sorted(w);
}

double abs_central_moment(const Sample& s, int r) {
    if (r < 1) throw std::domain_error("abs_central_moment: needs r >= 1");
    if (r == 1) return sample_mad(s);
    const double mean = s.values().mean();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        acc += std::pow(std::fabs(s.values()[i] - mean), r);
    return acc / static_cast<double>(s.size());
}

double loc_scale_quantile(const Sample& s, double p, const Distribution& dist,
                          bool mean_known) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("loc_scale_quantile: p must lie in (0,1)");
    const double mu_hat = mean_known ? dist.mean() : s.values().mean();
    const double sigma_hat = std::sqrt(sample_variance(s));
    return mu_hat + sigma_hat * dist.y_quantile(p);
}

}  // namespace qdcor
