#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>

namespace qdcor {

enum class Family { Gaussian, Student, Custom };

/// Caller-supplied base distribution. `cdf` and `pdf` are required; the
/// quantile evaluator is optional (bisection on the cdf otherwise). The base
/// need not be standardized: its mean and standard deviation are computed by
/// quadrature and the standardized variate is derived from them. Evaluators
/// must be safe for concurrent calls.
struct CustomSpec {
    std::function<double(double)> cdf;
    std::function<double(double)> pdf;
    std::function<double(double)> quantile;  // optional
    std::string name = "custom";
};

struct MomentAvailability {
    int order = 0;
    bool exists = false;
};

/// Scalars consumed by the asymptotic covariance formulas, cached per
/// distribution. Density/cdf values are for X itself, not the standardized
/// variate. `gamma` is the correction used by the MedianAD variance;
/// `gamma_alt` is an alternative published form that agrees only when the
/// density is symmetric about the median (alpha == 0) and is kept for
/// diagnostics.
struct DistributionSummary {
    std::optional<double> e_y3;  // E[Y^3], empty when the moment does not exist
    std::optional<double> e_y4;  // E[Y^4]
    double theta = 0.0;          // E|X - mean|
    double med = 0.0;            // median of X
    double xi = 0.0;             // MedianAD of X
    double f_med = 0.0;
    double f_med_plus_xi = 0.0;
    double f_med_minus_xi = 0.0;
    double F_med_plus_xi = 0.0;
    double F_med_minus_xi = 0.0;
    double alpha = 0.0;  // f(med+xi) - f(med-xi)
    double beta = 0.0;   // f(med+xi) + f(med-xi)
    double gamma = 0.0;
    double gamma_alt = 0.0;
};

/// Location-scale wrapper over a standardized Gaussian/Student base or a
/// caller-supplied base: X = mu + sigma * B. Immutable; all methods are
/// const and safe for unrestricted concurrent use. The summary is computed
/// once on first access.
class Distribution {
public:
    static Distribution gaussian(double mu = 0.0, double sigma = 1.0);
    /// Standardized Student: the base is T * sqrt((df-2)/df) with T classical
    /// Student-t, so the base has unit variance. Requires df > 2.
    static Distribution student(double df, double mu = 0.0, double sigma = 1.0);
    static Distribution custom(CustomSpec spec, double mu = 0.0, double sigma = 1.0);

    Family family() const { return family_; }
    double mu() const { return mu_; }
    double sigma() const { return sigma_; }
    /// Degrees of freedom; only meaningful for the Student family.
    double df() const { return df_; }
    const std::string& name() const { return name_; }

    double cdf(double x) const;
    double pdf(double x) const;
    /// Generalized inverse cdf. Requires 0 < p < 1.
    double quantile(double p) const;

    double mean() const { return mu_ + sigma_ * base_mean_; }
    double stddev() const { return sigma_ * base_sd_; }

    MomentAvailability moment_availability(int order) const;
    bool moment_exists(int order) const { return moment_availability(order).exists; }

    // Functionals of the standardized variate Y = (X - mean)/stddev. These do
    // not depend on mu/sigma.
    double y_cdf(double y) const;
    double y_pdf(double y) const;
    double y_quantile(double p) const;

    /// E[Y^k]. k = 1, 2 are 0 and 1 by construction; higher orders use closed
    /// forms for the built-in families and quadrature otherwise.
    double standardized_moment(int k) const;
    /// E[Y^k 1{a < Y <= b}]; a <= b, either endpoint may be infinite.
    double partial_expectation(int k, double a, double b) const;
    /// E[|Y|^k 1{a < Y <= b}].
    double abs_partial_expectation(int k, double a, double b) const;
    /// E[|Y|^k].
    double abs_moment(int k) const;

    /// (median, MedianAD) of X. xi solves F(med+xi) - F(med-xi) = 1/2 by
    /// bisection over [0, 100*stddev] to 1e-12.
    std::pair<double, double> median_abs_deviation() const;

    const DistributionSummary& summary() const;

private:
    Distribution(Family f, double mu, double sigma, double df, CustomSpec spec);

    double base_cdf(double b) const;
    double base_pdf(double b) const;
    double base_quantile(double p) const;

    Family family_;
    double mu_;
    double sigma_;
    double df_ = 0.0;
    double student_scale_ = 1.0;  // sqrt((df-2)/df)
    CustomSpec custom_;
    double base_mean_ = 0.0;
    double base_sd_ = 1.0;
    std::string name_;

    struct SummaryCache;
    std::shared_ptr<SummaryCache> cache_;
};

}  // namespace qdcor
