#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "qdcor/distributions.hpp"
#include "qdcor/estimators.hpp"

namespace qdcor {

/// A transform h of an estimator, represented by its value and derivative at
/// the limit point (the asymptotic results consume nothing else). Presets
/// are resolved against the limit point of whichever operation they feed.
struct TransformSpec {
    enum class Preset { Identity, Negate, Log, Square, Custom };
    Preset preset = Preset::Identity;
    double value_at = 0.0;       // used for Custom
    double derivative_at = 1.0;  // used for Custom

    static TransformSpec identity() { return {Preset::Identity, 0.0, 1.0}; }
    static TransformSpec negate() { return {Preset::Negate, 0.0, -1.0}; }
    static TransformSpec log() { return {Preset::Log, 0.0, 0.0}; }
    static TransformSpec square() { return {Preset::Square, 0.0, 0.0}; }
    static TransformSpec custom(double value_at, double derivative_at) {
        return {Preset::Custom, value_at, derivative_at};
    }
};

/// Transform resolved at a concrete limit point.
struct ResolvedTransform {
    double value = 0.0;
    double deriv = 1.0;
};
ResolvedTransform resolve_transform(const TransformSpec& h, double point);

enum class QuantileKind { SampleQuantile, LocScaleUnknownMean, LocScaleKnownMean };

struct EstimatorPairSpec {
    QuantileKind quantile_kind = QuantileKind::SampleQuantile;
    double p = 0.95;
    DispersionKind dispersion = DispersionKind::variance();
    TransformSpec h1 = TransformSpec::identity();
    TransformSpec h2 = TransformSpec::identity();
};

/// sqrt(n)-scaled asymptotic covariance matrix of the (quantile, dispersion)
/// estimator pair, its correlation, the sign factor sgn(h1'*h2'), and a tag
/// naming which pairing produced it.
struct AsymptoticResult {
    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
    double corr = 0.0;
    int sign_factor = 1;
    std::string theorem;
};

/// Truncated-moment functional tau_k(eta(X), p).
struct TauSpec {
    enum class Eta { Identity, AbsDevFromMean };
    Eta eta = Eta::Identity;
    int k = 1;
    double p = 0.95;
};

/// tau_k(eta(X), p) = (1-p) (E[eta^k(X) | X > q_X(p)] - E[eta^k(X)]).
double tau(const Distribution& dist, const TauSpec& spec);

/// Sample quantile paired with the variance (r=2) or MAD (r=1).
AsymptoticResult asymptotic_hist_dispersion(const Distribution& dist, double p,
                                            int r, const TransformSpec& h1,
                                            const TransformSpec& h2);

/// Sample quantile paired with the sample MedianAD. Needs no moments.
AsymptoticResult asymptotic_hist_medianad(const Distribution& dist, double p,
                                          const TransformSpec& h1,
                                          const TransformSpec& h2);

/// Location-scale quantile estimator paired with the variance (r=2) or MAD
/// (r=1); mean_known selects the known-mean estimator variant.
AsymptoticResult asymptotic_locscale_dispersion(const Distribution& dist,
                                                double p, int r, bool mean_known,
                                                const TransformSpec& h1,
                                                const TransformSpec& h2);

/// Location-scale quantile estimator paired with the sample MedianAD.
AsymptoticResult asymptotic_locscale_medianad(const Distribution& dist, double p,
                                              bool mean_known,
                                              const TransformSpec& h1,
                                              const TransformSpec& h2);

/// Sample quantile paired with the r-th absolute central sample moment,
/// any integer r >= 1. Collapses exactly to asymptotic_hist_dispersion for
/// r in {1, 2}.
AsymptoticResult asymptotic_hist_abs_moment(const Distribution& dist, double p,
                                            int r, const TransformSpec& h1,
                                            const TransformSpec& h2);

/// Joint covariance of an m-vector of sample quantiles (orders ps, strictly
/// increasing) with the r-th absolute central moment, propagated through the
/// (m+1)x(m+1) jacobian: returns J * Sigma * J^T. An identity jacobian
/// returns Sigma itself.
Eigen::MatrixXd vector_asymptotics(const Distribution& dist,
                                   const std::vector<double>& ps, int r,
                                   const Eigen::MatrixXd& jacobian);

/// Sample-size scaling: quantile side on v*n points, dispersion side on w*n.
/// Cross-covariance shrinks by 1/max(v,w), the variances by 1/v and 1/w,
/// the correlation by sqrt(min/max).
AsymptoticResult scale_for_sample_sizes(const AsymptoticResult& base, int v,
                                        int w);

struct ConditionCheck {
    enum class Status { Satisfied, Violated, Unknown };
    std::string label;
    Status status = Status::Unknown;
    std::string detail;
};

struct ConditionReport {
    std::vector<ConditionCheck> checks;
    bool all_satisfied() const;
    /// Single-line rendering like "Q1=ok;MD1=violated[...]".
    std::string to_string() const;
};

/// Numeric spot-checks of the smoothness/moment conditions each estimator
/// pairing requires. Report-only; never throws on violations.
ConditionReport validate_conditions(const Distribution& dist,
                                    const EstimatorPairSpec& spec);

/// Dispatch an EstimatorPairSpec to the matching operation above.
AsymptoticResult asymptotic_for_pair(const Distribution& dist,
                                     const EstimatorPairSpec& spec);

}  // namespace qdcor
