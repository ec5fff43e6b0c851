#include "qdcor/asymptotics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qdcor/errors.hpp"

namespace qdcor {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDensityEps = 1e-12;

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

void check_p(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("asymptotics: p must lie in (0,1)");
}

void require_density(double f, const char* label, const std::string& where) {
    if (!(f > kDensityEps))
        throw ConditionViolated(label, "density not positive at " + where);
}

void require_moment(const Distribution& dist, int order, const char* label) {
    if (!dist.moment_exists(order))
        throw MomentUnavailable(
            order, dist.name() + ": needs E[|X|^" + std::to_string(order) +
                       "] < inf (" + label + ")");
}

// Correction coefficient c entering |Y|^r + c*Y: c = -r E[Y^{r-1} sgn(Y)^r].
// For r=1 this is 2 F_Y(0) - 1 and for r=2 it vanishes identically, which is
// what makes the general-r result collapse onto the variance/MAD cases.
double dispersion_correction(const Distribution& dist, int r) {
    if (r == 1) return 2.0 * dist.y_cdf(0.0) - 1.0;
    if (r % 2 == 0) return -r * dist.standardized_moment(r - 1);
    const double g = dist.abs_partial_expectation(r - 1, 0.0, kInf) -
                     dist.abs_partial_expectation(r - 1, -kInf, 0.0);
    return -static_cast<double>(r) * g;
}

// Var(|Y|^r + c Y), expanded into raw absolute moments.
double dispersion_variance(const Distribution& dist, int r, double c) {
    const double e2r = dist.abs_moment(2 * r);
    const double er = dist.abs_moment(r);
    double v = e2r - er * er;
    if (c != 0.0) {
        const double e_absr_y = dist.abs_partial_expectation(r + 1, 0.0, kInf) -
                                dist.abs_partial_expectation(r + 1, -kInf, 0.0);
        v += 2.0 * c * e_absr_y + c * c;
    }
    return v;
}

// tau-like tail pieces of the standardized variate.
double tail_abs_moment(const Distribution& dist, int r, double p, double q_y) {
    return dist.abs_partial_expectation(r, q_y, kInf) -
           (1.0 - p) * dist.abs_moment(r);
}

double tail_first_moment(const Distribution& dist, double q_y) {
    return dist.partial_expectation(1, q_y, kInf);
}

struct PairResult {
    double s11, s12, s22;  // identity-transform covariance entries
    double base_corr;      // correlation before the sign factor
};

AsymptoticResult assemble(const PairResult& pr, const ResolvedTransform& h1,
                          const ResolvedTransform& h2, std::string tag) {
    AsymptoticResult out;
    out.cov(0, 0) = h1.deriv * h1.deriv * pr.s11;
    out.cov(1, 1) = h2.deriv * h2.deriv * pr.s22;
    out.cov(0, 1) = out.cov(1, 0) = h1.deriv * h2.deriv * pr.s12;
    out.sign_factor = sign_of(h1.deriv * h2.deriv);
    out.corr = out.sign_factor * pr.base_corr;
    out.theorem = std::move(tag);
    return out;
}

// Sample quantile vs r-th absolute central moment; identity-transform
// entries shared by the r in {1,2} results, the general-r result and the
// quantile-vector block.
PairResult hist_abs_moment_core(const Distribution& dist, double p, int r) {
    check_p(p);
    if (r < 1) throw std::domain_error("asymptotics: r must be >= 1");
    require_moment(dist, 2 * r, r == 2 ? "MD1" : (r == 1 ? "MD2" : "M_r"));
    const double q_y = dist.y_quantile(p);
    const double sd = dist.stddev();
    const double f_q = dist.y_pdf(q_y) / sd;
    require_density(f_q, "Q1", "q_X(p)");
    if (r == 1) require_density(dist.pdf(dist.mean()), "MD2", "mu");

    const double c = dispersion_correction(dist, r);
    const double t_r = tail_abs_moment(dist, r, p, q_y);
    const double t_1 = tail_first_moment(dist, q_y);
    const double var_d = dispersion_variance(dist, r, c);
    const double cross = t_r + c * t_1;

    PairResult pr;
    pr.s11 = p * (1.0 - p) / (f_q * f_q);
    pr.s12 = std::pow(sd, r) * cross / f_q;
    pr.s22 = std::pow(sd, 2 * r) * var_d;
    const double den = std::sqrt(p * (1.0 - p) * var_d);
    pr.base_corr = den > 0.0 ? cross / den : 0.0;
    return pr;
}

std::string dispersion_tag(int r) {
    if (r == 2) return "variance";
    if (r == 1) return "mad";
    return "abs-moment(r=" + std::to_string(r) + ")";
}

// Shared by the unknown- and known-mean location-scale variants.
struct LocScaleCommon {
    double q_y, sd, a_factor;  // a_factor = asymptotic variance of the
                               // standardized quantile estimator
};

LocScaleCommon locscale_prepare(const Distribution& dist, double p,
                                bool mean_known) {
    check_p(p);
    require_moment(dist, 4, "Q2");
    LocScaleCommon c;
    c.q_y = dist.y_quantile(p);
    c.sd = dist.stddev();
    const double e3 = dist.standardized_moment(3);
    const double e4 = dist.standardized_moment(4);
    c.a_factor = mean_known
                     ? c.q_y * c.q_y * (e4 - 1.0) / 4.0
                     : 1.0 + c.q_y * (c.q_y * (e4 - 1.0) / 4.0 + e3);
    return c;
}

}  // namespace

ResolvedTransform resolve_transform(const TransformSpec& h, double point) {
    switch (h.preset) {
        case TransformSpec::Preset::Identity: return {point, 1.0};
        case TransformSpec::Preset::Negate: return {-point, -1.0};
        case TransformSpec::Preset::Log: return {std::log(point), 1.0 / point};
        case TransformSpec::Preset::Square: return {point * point, 2.0 * point};
        case TransformSpec::Preset::Custom: return {h.value_at, h.derivative_at};
    }
    return {point, 1.0};
}

double tau(const Distribution& dist, const TauSpec& spec) {
    check_p(spec.p);
    if (spec.k < 1) throw std::domain_error("tau: k must be >= 1");
    const double q_y = dist.y_quantile(spec.p);
    const double sd = dist.stddev();
    if (spec.eta == TauSpec::Eta::AbsDevFromMean)
        return std::pow(sd, spec.k) * tail_abs_moment(dist, spec.k, spec.p, q_y);
    // eta = identity: expand E[X^k 1{X>q}] - (1-p) E[X^k] binomially in
    // X = mean + sd*Y; the j=0 terms cancel.
    require_moment(dist, spec.k, "M_k");
    const double mean = dist.mean();
    double acc = 0.0;
    double binom = 1.0;
    for (int j = 1; j <= spec.k; ++j) {
        binom = binom * (spec.k - j + 1) / j;
        const double tail_j = dist.partial_expectation(j, q_y, kInf) -
                              (1.0 - spec.p) * dist.standardized_moment(j);
        acc += binom * std::pow(mean, spec.k - j) * std::pow(sd, j) * tail_j;
    }
    return acc;
}

AsymptoticResult asymptotic_hist_dispersion(const Distribution& dist, double p,
                                            int r, const TransformSpec& h1,
                                            const TransformSpec& h2) {
    if (r != 1 && r != 2)
        throw std::domain_error("asymptotic_hist_dispersion: r must be 1 or 2");
    const PairResult pr = hist_abs_moment_core(dist, p, r);
    const auto rh1 = resolve_transform(h1, dist.quantile(p));
    const auto rh2 =
        resolve_transform(h2, std::pow(dist.stddev(), r) * dist.abs_moment(r));
    return assemble(pr, rh1, rh2, "sample-quantile/" + dispersion_tag(r));
}

AsymptoticResult asymptotic_hist_abs_moment(const Distribution& dist, double p,
                                            int r, const TransformSpec& h1,
                                            const TransformSpec& h2) {
    const PairResult pr = hist_abs_moment_core(dist, p, r);
    const auto rh1 = resolve_transform(h1, dist.quantile(p));
    const auto rh2 =
        resolve_transform(h2, std::pow(dist.stddev(), r) * dist.abs_moment(r));
    return assemble(pr, rh1, rh2, "sample-quantile/" + dispersion_tag(r));
}

AsymptoticResult asymptotic_hist_medianad(const Distribution& dist, double p,
                                          const TransformSpec& h1,
                                          const TransformSpec& h2) {
    check_p(p);
    const DistributionSummary& s = dist.summary();
    const double q_x = dist.quantile(p);
    const double f_q = dist.pdf(q_x);
    require_density(f_q, "Q1", "q_X(p)");
    require_density(s.f_med, "MD3", "median");
    require_density(s.beta, "MD3", "med+-xi (both)");

    const double num =
        -std::max(0.0, s.F_med_plus_xi - std::max(s.F_med_minus_xi, p)) +
        0.5 * (1.0 - p) +
        (s.alpha / s.f_med) * std::max(-0.5 * p, 0.5 * (p - 1.0));
    const double one_plus_gamma = 1.0 + s.gamma / (s.f_med * s.f_med);

    PairResult pr;
    pr.s11 = p * (1.0 - p) / (f_q * f_q);
    pr.s12 = num / (f_q * s.beta);
    pr.s22 = one_plus_gamma / (4.0 * s.beta * s.beta);
    const double den = std::sqrt(0.25 * p * (1.0 - p)) * std::sqrt(one_plus_gamma);
    pr.base_corr = den > 0.0 ? num / den : 0.0;

    const auto rh1 = resolve_transform(h1, q_x);
    const auto rh2 = resolve_transform(h2, s.xi);
    return assemble(pr, rh1, rh2, "sample-quantile/medianad");
}

AsymptoticResult asymptotic_locscale_dispersion(const Distribution& dist,
                                                double p, int r, bool mean_known,
                                                const TransformSpec& h1,
                                                const TransformSpec& h2) {
    if (r != 1 && r != 2)
        throw std::domain_error("asymptotic_locscale_dispersion: r must be 1 or 2");
    const LocScaleCommon lc = locscale_prepare(dist, p, mean_known);
    const double e3 = dist.standardized_moment(3);
    const double f_y0 = dist.y_cdf(0.0);
    const double c = dispersion_correction(dist, r);  // (2-r)(2 F_Y(0) - 1)
    const double var_d = dispersion_variance(dist, r, c);

    // Contribution of the estimated scale to the cross-covariance.
    const double from_scale =
        0.5 * lc.q_y *
        (dist.abs_moment(r + 2) - dist.abs_moment(r) +
         (2 - r) * (2.0 * f_y0 - 1.0) * e3);
    // Contribution of the estimated location (dropped when the mean is known).
    const double from_mean =
        mean_known ? 0.0
                   : dist.standardized_moment(r + 1) +
                         (2 - r) * (2.0 * f_y0 - 1.0 -
                                    2.0 * dist.abs_partial_expectation(r + 1,
                                                                       -kInf, 0.0));
    const double num = from_scale + from_mean;

    PairResult pr;
    pr.s11 = lc.sd * lc.sd * lc.a_factor;
    pr.s12 = std::pow(lc.sd, r + 1) * num;
    pr.s22 = std::pow(lc.sd, 2 * r) * var_d;
    const double den = std::sqrt(lc.a_factor * var_d);
    pr.base_corr = den > 0.0 ? num / den : 0.0;

    const auto rh1 = resolve_transform(h1, dist.quantile(p));
    const auto rh2 =
        resolve_transform(h2, std::pow(lc.sd, r) * dist.abs_moment(r));
    const std::string kind =
        mean_known ? "locscale-quantile(known-mean)/" : "locscale-quantile/";
    return assemble(pr, rh1, rh2, kind + dispersion_tag(r));
}

AsymptoticResult asymptotic_locscale_medianad(const Distribution& dist, double p,
                                              bool mean_known,
                                              const TransformSpec& h1,
                                              const TransformSpec& h2) {
    const LocScaleCommon lc = locscale_prepare(dist, p, mean_known);
    const DistributionSummary& s = dist.summary();
    require_density(s.f_med, "MD3", "median");
    require_density(s.beta, "MD3", "med+-xi (both)");

    const double mean = dist.mean();
    const double a_minus = (s.med - s.xi - mean) / lc.sd;
    const double a_plus = (s.med + s.xi - mean) / lc.sd;
    const double a_med = (s.med - mean) / lc.sd;
    const double fy_plus = dist.y_pdf(a_plus);
    const double fy_minus = dist.y_pdf(a_minus);
    const double fy_med = dist.y_pdf(a_med);
    const double rho = (fy_plus - fy_minus) / fy_med;

    // E[(Y^2 q_Y + 2Y) 1{...}] over the MedianAD window and the lower half;
    // the 2Y part belongs to the estimated location and drops when the mean
    // is known.
    auto weighted = [&](double lo, double hi) {
        double v = lc.q_y * dist.partial_expectation(2, lo, hi);
        if (!mean_known) v += 2.0 * dist.partial_expectation(1, lo, hi);
        return v;
    };
    const double e_window = weighted(a_minus, a_plus);
    const double e_lower = weighted(-kInf, a_med);
    const double num = -e_window + rho * e_lower + 0.5 * lc.q_y * (1.0 - rho);

    const double one_plus_gamma = 1.0 + s.gamma / (s.f_med * s.f_med);
    PairResult pr;
    pr.s11 = lc.sd * lc.sd * lc.a_factor;
    pr.s12 = lc.sd * lc.sd * num / (2.0 * (fy_plus + fy_minus));
    pr.s22 = one_plus_gamma / (4.0 * s.beta * s.beta);
    const double den = std::sqrt(one_plus_gamma) * std::sqrt(lc.a_factor);
    pr.base_corr = den > 0.0 ? num / den : 0.0;

    const auto rh1 = resolve_transform(h1, dist.quantile(p));
    const auto rh2 = resolve_transform(h2, s.xi);
    const std::string kind =
        mean_known ? "locscale-quantile(known-mean)/" : "locscale-quantile/";
    return assemble(pr, rh1, rh2, kind + "medianad");
}

Eigen::MatrixXd vector_asymptotics(const Distribution& dist,
                                   const std::vector<double>& ps, int r,
                                   const Eigen::MatrixXd& jacobian) {
    if (ps.empty()) throw std::domain_error("vector_asymptotics: empty ps");
    for (std::size_t i = 0; i < ps.size(); ++i) {
        check_p(ps[i]);
        if (i > 0 && !(ps[i] > ps[i - 1]))
            throw std::domain_error("vector_asymptotics: ps must be strictly increasing");
    }
    const auto m = static_cast<Eigen::Index>(ps.size());
    if (jacobian.rows() != m + 1 || jacobian.cols() != m + 1)
        throw std::domain_error("vector_asymptotics: jacobian must be (m+1)x(m+1)");

    Eigen::MatrixXd sigma(m + 1, m + 1);
    std::vector<double> f(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) {
        f[i] = dist.pdf(dist.quantile(ps[i]));
        require_density(f[i], "Q1", "q_X(p_i)");
    }
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = i; j < m; ++j) {
            const double v = ps[static_cast<std::size_t>(i)] *
                             (1.0 - ps[static_cast<std::size_t>(j)]) /
                             (f[static_cast<std::size_t>(i)] *
                              f[static_cast<std::size_t>(j)]);
            sigma(i, j) = sigma(j, i) = v;
        }
    for (Eigen::Index i = 0; i < m; ++i) {
        const PairResult pr =
            hist_abs_moment_core(dist, ps[static_cast<std::size_t>(i)], r);
        sigma(i, m) = sigma(m, i) = pr.s12;
        sigma(m, m) = pr.s22;  // p-independent; same value every pass
    }
    return jacobian * sigma * jacobian.transpose();
}

AsymptoticResult scale_for_sample_sizes(const AsymptoticResult& base, int v,
                                        int w) {
    if (v < 1 || w < 1)
        throw std::domain_error("scale_for_sample_sizes: v, w must be >= 1");
    AsymptoticResult out = base;
    const double vmax = std::max(v, w);
    const double vmin = std::min(v, w);
    out.cov(0, 0) /= v;
    out.cov(1, 1) /= w;
    out.cov(0, 1) /= vmax;
    out.cov(1, 0) /= vmax;
    out.corr *= std::sqrt(vmin / vmax);
    if (v != 1 || w != 1)
        out.theorem += "|scaled(v=" + std::to_string(v) +
                       ",w=" + std::to_string(w) + ")";
    return out;
}

namespace {

using Status = ConditionCheck::Status;

ConditionCheck moment_check(const Distribution& dist, int order,
                            const std::string& label) {
    ConditionCheck c{label, Status::Satisfied, ""};
    if (!dist.moment_exists(order)) {
        c.status = Status::Violated;
        c.detail = "E[X^" + std::to_string(order) + "] nonexistent";
    } else {
        c.detail = "E[X^" + std::to_string(order) + "] finite";
    }
    return c;
}

// Density positivity plus a central-difference check that the cdf is
// differentiable with derivative f at the named points.
ConditionCheck smoothness_check(const Distribution& dist,
                                const std::string& label,
                                const std::vector<std::pair<std::string, double>>& points,
                                bool positivity_any = false) {
    ConditionCheck c{label, Status::Satisfied, ""};
    std::ostringstream detail;
    const double h = 1e-6 * std::max(1.0, dist.stddev());
    bool any_positive = false;
    try {
        for (const auto& [name, x] : points) {
            const double f = dist.pdf(x);
            const double num_deriv = (dist.cdf(x + h) - dist.cdf(x - h)) / (2.0 * h);
            const bool smooth = std::fabs(num_deriv - f) <=
                                1e-3 * std::max(1.0, std::fabs(f)) + 1e-9;
            const bool positive = f > kDensityEps;
            any_positive = any_positive || positive;
            if (!smooth) c.status = Status::Violated;
            if (!positivity_any && !positive) c.status = Status::Violated;
            detail << name << ": f=" << f << (smooth ? "" : " (cdf-derivative mismatch)")
                   << "; ";
        }
        if (positivity_any && !any_positive) c.status = Status::Violated;
    } catch (const std::exception& e) {
        c.status = Status::Unknown;
        detail << "evaluation failed: " << e.what();
    }
    c.detail = detail.str();
    return c;
}

}  // namespace

bool ConditionReport::all_satisfied() const {
    for (const auto& c : checks)
        if (c.status != Status::Satisfied) return false;
    return true;
}

std::string ConditionReport::to_string() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        if (i) out << ";";
        out << checks[i].label << "=";
        switch (checks[i].status) {
            case Status::Satisfied: out << "ok"; break;
            case Status::Violated: out << "violated[" << checks[i].detail << "]"; break;
            case Status::Unknown: out << "unknown[" << checks[i].detail << "]"; break;
        }
    }
    return out.str();
}

ConditionReport validate_conditions(const Distribution& dist,
                                    const EstimatorPairSpec& spec) {
    ConditionReport report;
    check_p(spec.p);

    if (spec.quantile_kind == QuantileKind::SampleQuantile) {
        report.checks.push_back(smoothness_check(
            dist, "Q1", {{"q_X(p)", dist.quantile(spec.p)}}));
    } else {
        report.checks.push_back(moment_check(dist, 4, "Q2"));
    }

    const DispersionKind d = spec.dispersion;
    switch (d.tag) {
        case DispersionKind::Tag::Variance:
            report.checks.push_back(moment_check(dist, 4, "MD1"));
            break;
        case DispersionKind::Tag::MAD: {
            ConditionCheck c = moment_check(dist, 2, "MD2");
            auto cont = smoothness_check(dist, "MD2", {{"mu", dist.mean()}});
            if (cont.status == Status::Violated) c.status = Status::Violated;
            c.detail += "; " + cont.detail;
            report.checks.push_back(c);
            break;
        }
        case DispersionKind::Tag::MedianAD: {
            const auto& s = dist.summary();
            auto c = smoothness_check(dist, "MD3",
                                      {{"med", s.med},
                                       {"med-xi", s.med - s.xi},
                                       {"med+xi", s.med + s.xi}},
                                      /*positivity_any=*/true);
            // (P) at the median itself is always required.
            if (!(s.f_med > kDensityEps)) c.status = Status::Violated;
            if (!(s.beta > kDensityEps)) c.status = Status::Violated;
            report.checks.push_back(c);
            break;
        }
        case DispersionKind::Tag::AbsCentralMoment: {
            const std::string label =
                d.r == 2 ? "MD1" : (d.r == 1 ? "MD2" : "M_" + std::to_string(d.r));
            report.checks.push_back(moment_check(dist, 2 * d.r, label));
            if (d.r == 1)
                report.checks.push_back(
                    smoothness_check(dist, "MD2", {{"mu", dist.mean()}}));
            break;
        }
    }
    return report;
}

AsymptoticResult asymptotic_for_pair(const Distribution& dist,
                                     const EstimatorPairSpec& spec) {
    const bool sample = spec.quantile_kind == QuantileKind::SampleQuantile;
    const bool known = spec.quantile_kind == QuantileKind::LocScaleKnownMean;
    switch (spec.dispersion.tag) {
        case DispersionKind::Tag::Variance:
            return sample ? asymptotic_hist_dispersion(dist, spec.p, 2, spec.h1,
                                                       spec.h2)
                          : asymptotic_locscale_dispersion(dist, spec.p, 2, known,
                                                           spec.h1, spec.h2);
        case DispersionKind::Tag::MAD:
            return sample ? asymptotic_hist_dispersion(dist, spec.p, 1, spec.h1,
                                                       spec.h2)
                          : asymptotic_locscale_dispersion(dist, spec.p, 1, known,
                                                           spec.h1, spec.h2);
        case DispersionKind::Tag::MedianAD:
            return sample ? asymptotic_hist_medianad(dist, spec.p, spec.h1, spec.h2)
                          : asymptotic_locscale_medianad(dist, spec.p, known,
                                                         spec.h1, spec.h2);
        case DispersionKind::Tag::AbsCentralMoment:
            if (sample)
                return asymptotic_hist_abs_moment(dist, spec.p, spec.dispersion.r,
                                                  spec.h1, spec.h2);
            if (spec.dispersion.r == 1 || spec.dispersion.r == 2)
                return asymptotic_locscale_dispersion(dist, spec.p,
                                                      spec.dispersion.r, known,
                                                      spec.h1, spec.h2);
            throw std::domain_error(
                "asymptotic_for_pair: location-scale pairing with absolute "
                "central moments is only available for r in {1,2}");
    }
    throw std::logic_error("asymptotic_for_pair: unreachable");
}

}  // namespace qdcor
