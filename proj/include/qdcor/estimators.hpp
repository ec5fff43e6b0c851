#pragma once

#include <Eigen/Core>

#include "qdcor/distributions.hpp"

namespace qdcor {

/// Which measure-of-dispersion estimator a pairing uses. AbsCentralMoment
/// carries the order r >= 1; r=1 coincides with MAD and r=2 with the
/// 1/n-denominator variance.
struct DispersionKind {
    enum class Tag { Variance, MAD, MedianAD, AbsCentralMoment };
    Tag tag = Tag::Variance;
    int r = 2;

    static DispersionKind variance() { return {Tag::Variance, 2}; }
    static DispersionKind mad() { return {Tag::MAD, 1}; }
    static DispersionKind median_ad() { return {Tag::MedianAD, 0}; }
    static DispersionKind abs_central_moment(int r) {
        return {Tag::AbsCentralMoment, r};
    }
};

/// Immutable sample wrapper. Rejects non-finite entries eagerly and requires
/// n >= 1 (variance additionally requires n >= 2 at call time).
class Sample {
public:
    explicit Sample(Eigen::VectorXd values);
    const Eigen::VectorXd& values() const { return values_; }
    Eigen::Index size() const { return values_.size(); }

private:
    Eigen::VectorXd values_;
};

/// ceil(n*p)-th order statistic (1-based). Requires 0 < p < 1.
double sample_quantile(const Sample& s, double p);

/// Unbiased (n-1 denominator) variance. Requires n >= 2.
double sample_variance(const Sample& s);

/// Mean absolute deviation about the sample mean, 1/n denominator.
double sample_mad(const Sample& s);

/// Average of the floor((n+1)/2)-th and floor((n+2)/2)-th order statistics.
double sample_median(const Sample& s);

/// Sample median (same convention) of |X_j - sample_median|.
double sample_median_ad(const Sample& s);

/// r-th absolute central moment about the sample mean, 1/n denominator.
/// r = 1 equals sample_mad; r = 2 equals (n-1)/n * sample_variance.
double abs_central_moment(const Sample& s, int r);

/// mu_hat + sigma_hat * q_Y(p): the sample mean (or the model mean when
/// mean_known) plus the sample standard deviation times the standardized
/// quantile of `dist`. Requires n >= 2.
double loc_scale_quantile(const Sample& s, double p, const Distribution& dist,
                          bool mean_known);

}  // namespace qdcor
