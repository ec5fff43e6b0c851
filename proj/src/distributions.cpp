#include "qdcor/distributions.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

#include "qdcor/errors.hpp"
#include "qdcor/quadrature.hpp"
#include "qdcor/roots.hpp"
#include "qdcor/special_functions.hpp"

namespace qdcor {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kQuadRelTol = 1e-10;

double gaussian_abs_moment(int k) {
    // E[|Z|^k] = 2^{k/2} Gamma((k+1)/2) / sqrt(pi)
    return std::exp(0.5 * k * std::log(2.0) + std::lgamma(0.5 * (k + 1))) /
           std::sqrt(M_PI);
}

double student_std_abs_moment(int k, double df) {
    // E[|Y|^k] for the unit-variance Student: (df-2)^{k/2}
    //   * Gamma((k+1)/2) Gamma((df-k)/2) / (sqrt(pi) Gamma(df/2)),  k < df.
    return std::exp(0.5 * k * std::log(df - 2.0) + std::lgamma(0.5 * (k + 1)) +
                    std::lgamma(0.5 * (df - k)) - std::lgamma(0.5 * df)) /
           std::sqrt(M_PI);
}

// int_a^b y^k phi(y) dy by the two-term recurrence; infinite endpoints allowed.
double gaussian_partial(int k, double a, double b) {
    auto tail = [](double x, int j) {
        if (std::isinf(x)) return 0.0;
        return std::pow(x, j) * sf::normal_pdf(x);
    };
    const double cdf_a = std::isinf(a) ? (a < 0 ? 0.0 : 1.0) : sf::normal_cdf(a);
    const double cdf_b = std::isinf(b) ? (b < 0 ? 0.0 : 1.0) : sf::normal_cdf(b);
    double m_prev = cdf_b - cdf_a;  // M_0
    if (k == 0) return m_prev;
    const double pdf_a = std::isinf(a) ? 0.0 : sf::normal_pdf(a);
    const double pdf_b = std::isinf(b) ? 0.0 : sf::normal_pdf(b);
    double m_cur = pdf_a - pdf_b;  // M_1
    for (int j = 2; j <= k; ++j) {
        const double next = (j - 1) * m_prev + tail(a, j - 1) - tail(b, j - 1);
        m_prev = m_cur;
        m_cur = next;
    }
    return m_cur;
}
}  // namespace

struct Distribution::SummaryCache {
    std::once_flag flag;
    DistributionSummary value;
};

Distribution::Distribution(Family f, double mu, double sigma, double df,
                           CustomSpec spec)
    : family_(f), mu_(mu), sigma_(sigma), df_(df), custom_(std::move(spec)),
      cache_(std::make_shared<SummaryCache>()) {
    if (!(sigma_ > 0.0)) throw std::domain_error("Distribution: sigma must be > 0");
    switch (family_) {
        case Family::Gaussian:
            name_ = "gaussian";
            break;
        case Family::Student: {
            if (!(df_ > 2.0))
                throw std::domain_error(
                    "Distribution: standardized Student requires df > 2");
            student_scale_ = std::sqrt((df_ - 2.0) / df_);
            char buf[48];
            std::snprintf(buf, sizeof(buf), "student(%g)", df_);
            name_ = buf;
            break;
        }
        case Family::Custom: {
            if (!custom_.cdf || !custom_.pdf)
                throw std::invalid_argument(
                    "Distribution: custom base needs cdf and pdf");
            name_ = custom_.name;
            // Base mean/sd by quadrature, anchored at the base median so the
            // integration split lands inside the support.
            const double med = base_quantile(0.5);
            auto m1 = integrate(
                [&](double u) { return (med + u) * custom_.pdf(med + u); }, -kInf,
                kInf, kQuadRelTol);
            auto m2 = integrate(
                [&](double u) {
                    const double d = med + u - m1;
                    return d * d * custom_.pdf(med + u);
                },
                -kInf, kInf, kQuadRelTol);
            if (!(m2 > 0.0))
                throw std::domain_error("Distribution: custom base has zero variance");
            base_mean_ = m1;
            base_sd_ = std::sqrt(m2);
            break;
        }
    }
}

Distribution Distribution::gaussian(double mu, double sigma) {
    return Distribution(Family::Gaussian, mu, sigma, 0.0, {});
}

Distribution Distribution::student(double df, double mu, double sigma) {
    return Distribution(Family::Student, mu, sigma, df, {});
}

Distribution Distribution::custom(CustomSpec spec, double mu, double sigma) {
    return Distribution(Family::Custom, mu, sigma, 0.0, std::move(spec));
}

double Distribution::base_cdf(double b) const {
    switch (family_) {
        case Family::Gaussian: return sf::normal_cdf(b);
        case Family::Student: return sf::student_cdf(b / student_scale_, df_);
        case Family::Custom: return custom_.cdf(b);
    }
    return 0.0;
}

double Distribution::base_pdf(double b) const {
    switch (family_) {
        case Family::Gaussian: return sf::normal_pdf(b);
        case Family::Student: return sf::student_pdf(b / student_scale_, df_) / student_scale_;
        case Family::Custom: return custom_.pdf(b);
    }
    return 0.0;
}

double Distribution::base_quantile(double p) const {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("quantile: p must lie in (0,1)");
    switch (family_) {
        case Family::Gaussian: return sf::normal_quantile(p);
        case Family::Student:
            if (p == 0.5) return 0.0;
            return sf::student_quantile(p, df_) * student_scale_;
        case Family::Custom: {
            if (custom_.quantile) return custom_.quantile(p);
            // Expand a bracket, then bisect the cdf to absolute 1e-12.
            double lo = -1.0, hi = 1.0;
            for (int i = 0; i < 1100 && custom_.cdf(lo) > p; ++i) lo *= 2.0;
            for (int i = 0; i < 1100 && custom_.cdf(hi) < p; ++i) hi *= 2.0;
            return bisect([&](double x) { return custom_.cdf(x) - p; }, lo, hi,
                          1e-12, 300);
        }
    }
    return 0.0;
}

double Distribution::cdf(double x) const { return base_cdf((x - mu_) / sigma_); }

double Distribution::pdf(double x) const {
    return base_pdf((x - mu_) / sigma_) / sigma_;
}

double Distribution::quantile(double p) const {
    return mu_ + sigma_ * base_quantile(p);
}

MomentAvailability Distribution::moment_availability(int order) const {
    if (order < 0) throw std::domain_error("moment_availability: order >= 0");
    bool exists = true;
    if (family_ == Family::Student) exists = order < df_;
    return {order, exists};
}

double Distribution::y_cdf(double y) const {
    return base_cdf(base_mean_ + base_sd_ * y);
}

double Distribution::y_pdf(double y) const {
    return base_sd_ * base_pdf(base_mean_ + base_sd_ * y);
}

double Distribution::y_quantile(double p) const {
    return (base_quantile(p) - base_mean_) / base_sd_;
}

double Distribution::standardized_moment(int k) const {
    if (k < 1) throw std::domain_error("standardized_moment: k >= 1");
    if (!moment_exists(k))
        throw MomentUnavailable(k, name_ + ": moment of order " +
                                       std::to_string(k) + " does not exist");
    if (k == 1) return 0.0;
    if (k == 2) return 1.0;
    switch (family_) {
        case Family::Gaussian:
            return (k % 2 == 1) ? 0.0 : gaussian_abs_moment(k);
        case Family::Student:
            return (k % 2 == 1) ? 0.0 : student_std_abs_moment(k, df_);
        case Family::Custom:
            return partial_expectation(k, -kInf, kInf);
    }
    return 0.0;
}

double Distribution::partial_expectation(int k, double a, double b) const {
    if (k < 0) throw std::domain_error("partial_expectation: k >= 0");
    if (std::isnan(a) || std::isnan(b) || a > b)
        throw std::domain_error("partial_expectation: requires a <= b");
    if ((std::isinf(a) || std::isinf(b)) && !moment_exists(k))
        throw MomentUnavailable(k, name_ + ": moment of order " +
                                       std::to_string(k) + " does not exist");
    if (a == b) return 0.0;
    if (family_ == Family::Gaussian) return gaussian_partial(k, a, b);
    return integrate(
        [this, k](double y) { return std::pow(y, k) * y_pdf(y); }, a, b,
        kQuadRelTol);
}

double Distribution::abs_partial_expectation(int k, double a, double b) const {
    if (std::isnan(a) || std::isnan(b) || a > b)
        throw std::domain_error("abs_partial_expectation: requires a <= b");
    const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
    if (a >= 0.0) return partial_expectation(k, a, b);
    if (b <= 0.0) return sgn * partial_expectation(k, a, b);
    return sgn * partial_expectation(k, a, 0.0) + partial_expectation(k, 0.0, b);
}

double Distribution::abs_moment(int k) const {
    if (k < 0) throw std::domain_error("abs_moment: k >= 0");
    if (!moment_exists(k))
        throw MomentUnavailable(k, name_ + ": absolute moment of order " +
                                       std::to_string(k) + " does not exist");
    if (k == 0) return 1.0;
    switch (family_) {
        case Family::Gaussian: return gaussian_abs_moment(k);
        case Family::Student: return student_std_abs_moment(k, df_);
        case Family::Custom: return abs_partial_expectation(k, -kInf, kInf);
    }
    return 0.0;
}

std::pair<double, double> Distribution::median_abs_deviation() const {
    const double med = quantile(0.5);
    const double scale = stddev();
    const double xi = bisect(
        [&](double x) { return cdf(med + x) - cdf(med - x) - 0.5; }, 0.0,
        100.0 * scale, 1e-12, 300);
    return {med, xi};
}

const DistributionSummary& Distribution::summary() const {
    std::call_once(cache_->flag, [this] {
        DistributionSummary s;
        if (moment_exists(3)) s.e_y3 = standardized_moment(3);
        if (moment_exists(4)) s.e_y4 = standardized_moment(4);
        s.theta = stddev() * abs_moment(1);
        const auto [med, xi] = median_abs_deviation();
        s.med = med;
        s.xi = xi;
        s.f_med = pdf(med);
        s.f_med_plus_xi = pdf(med + xi);
        s.f_med_minus_xi = pdf(med - xi);
        s.F_med_plus_xi = cdf(med + xi);
        s.F_med_minus_xi = cdf(med - xi);
        s.alpha = s.f_med_plus_xi - s.f_med_minus_xi;
        s.beta = s.f_med_plus_xi + s.f_med_minus_xi;
        const double one_minus = 1.0 - s.F_med_minus_xi - s.F_med_plus_xi;
        s.gamma = s.alpha * s.alpha - 4.0 * s.alpha * s.f_med * one_minus;
        s.gamma_alt = s.alpha * s.f_med * (s.alpha - 4.0) * one_minus;
        cache_->value = s;
    });
    return cache_->value;
}

}  // namespace qdcor
