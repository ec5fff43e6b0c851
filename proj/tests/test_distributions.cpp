#include <doctest.h>

#include <cmath>
#include <thread>
#include <vector>

#include "qdcor/distributions.hpp"
#include "qdcor/errors.hpp"
#include "qdcor/special_functions.hpp"
#include "oracle_quadrature.hpp"

using namespace qdcor;

namespace {
Distribution custom_gaussian(double mu = 0.0, double sigma = 1.0) {
    CustomSpec spec;
    spec.cdf = [](double x) { return sf::normal_cdf(x); };
    spec.pdf = [](double x) { return sf::normal_pdf(x); };
    spec.name = "wrapped-gaussian";
    return Distribution::custom(spec, mu, sigma);
}
}  // namespace

TEST_CASE("construction guards") {
    CHECK_THROWS_AS(Distribution::gaussian(0.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(Distribution::gaussian(0.0, -1.0), std::domain_error);
    CHECK_THROWS_AS(Distribution::student(2.0), std::domain_error);
    CHECK_THROWS_AS(Distribution::student(1.5), std::domain_error);
    CHECK_NOTHROW(Distribution::student(2.0001));
    CustomSpec missing;
    missing.cdf = [](double) { return 0.5; };
    CHECK_THROWS_AS(Distribution::custom(missing), std::invalid_argument);
}

TEST_CASE("quantile") {
    const auto g = Distribution::gaussian();
    CHECK(g.quantile(0.5) == 0.0);
    // Frozen from the erfc-bisection oracle.
    const double q95 = oracle::normal_quantile_bisect(0.95);
    CHECK(q95 == doctest::Approx(1.644854).epsilon(1e-6));
    CHECK(g.quantile(0.95) == doctest::Approx(q95).epsilon(1e-12));
    CHECK(Distribution::student(5.0).quantile(0.5) == 0.0);
    CHECK_THROWS_AS(g.quantile(0.0), std::domain_error);
    CHECK_THROWS_AS(g.quantile(1.0), std::domain_error);
}

TEST_CASE("partial expectations") {
    const auto g = Distribution::gaussian();
    CHECK(g.partial_expectation(0, -INFINITY, INFINITY) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(g.partial_expectation(1, -INFINITY, INFINITY) == doctest::Approx(0.0).scale(1).epsilon(1e-14));
    const double q95 = g.quantile(0.95);
    const double tail1 = g.partial_expectation(1, q95, INFINITY);
    CHECK(tail1 == doctest::Approx(0.103136).epsilon(1e-5));          // equals phi(q)
    CHECK(tail1 == doctest::Approx(sf::normal_pdf(q95)).epsilon(1e-12));
    CHECK(tail1 == doctest::Approx(oracle::integrate(
                       [&](double y) { return y * sf::normal_pdf(y); }, q95,
                       INFINITY)).epsilon(1e-10));
    CHECK_THROWS_AS(g.partial_expectation(1, 2.0, 1.0), std::domain_error);

    const auto t5 = Distribution::student(5.0);
    const double lhs = t5.partial_expectation(2, -1.0, 0.5) +
                       t5.partial_expectation(2, 0.5, 2.0);
    CHECK(lhs == doctest::Approx(t5.partial_expectation(2, -1.0, 2.0)).epsilon(1e-9));
    CHECK_THROWS_AS(t5.partial_expectation(5, 0.0, INFINITY), MomentUnavailable);
}

TEST_CASE("standardized moments") {
    const auto g = Distribution::gaussian();
    CHECK(g.standardized_moment(2) == 1.0);
    CHECK(g.standardized_moment(4) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(g.standardized_moment(4) ==
          doctest::Approx(oracle::integrate(
              [](double y) { return y * y * y * y * sf::normal_pdf(y); },
              -INFINITY, INFINITY)).epsilon(1e-10));

    const auto t5 = Distribution::student(5.0);
    CHECK(t5.standardized_moment(4) == doctest::Approx(9.0).epsilon(1e-12));
    const double s = std::sqrt(3.0 / 5.0);
    CHECK(t5.standardized_moment(4) ==
          doctest::Approx(oracle::integrate(
              [s](double y) {
                  return std::pow(y, 4) * sf::student_pdf(y / s, 5.0) / s;
              },
              -INFINITY, INFINITY)).epsilon(1e-8));
    CHECK(t5.standardized_moment(3) == 0.0);
    CHECK_THROWS_AS(Distribution::student(3.0).standardized_moment(4), MomentUnavailable);
    CHECK_THROWS_AS(Distribution::student(3.0).standardized_moment(3), MomentUnavailable);
    CHECK_THROWS_AS(Distribution::student(4.0).standardized_moment(4), MomentUnavailable);
    CHECK_NOTHROW(Distribution::student(4.5).standardized_moment(4));
}

TEST_CASE("moment availability") {
    CHECK(Distribution::gaussian().moment_availability(40).exists);
    CHECK(Distribution::student(5.0).moment_availability(4).exists);
    CHECK_FALSE(Distribution::student(5.0).moment_availability(5).exists);
    CHECK_FALSE(Distribution::student(3.0).moment_availability(4).exists);
}

TEST_CASE("median absolute deviation") {
    const auto g = Distribution::gaussian();
    auto [med, xi] = g.median_abs_deviation();
    CHECK(med == 0.0);
    CHECK(xi == doctest::Approx(0.674490).epsilon(1e-5));
    CHECK(xi == doctest::Approx(oracle::normal_quantile_bisect(0.75)).epsilon(1e-10));

    auto [med2, xi2] = Distribution::gaussian(3.0, 2.0).median_abs_deviation();
    CHECK(med2 == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(xi2 == doctest::Approx(2.0 * xi).epsilon(1e-9));

    const auto t5 = Distribution::student(5.0);
    auto [med3, xi3] = t5.median_abs_deviation();
    CHECK(med3 == 0.0);
    CHECK(xi3 == doctest::Approx(t5.quantile(0.75)).epsilon(1e-10));
}

TEST_CASE("summary") {
    const auto g = Distribution::gaussian();
    const auto& s = g.summary();
    CHECK(s.alpha == doctest::Approx(0.0).scale(1).epsilon(1e-13));
    CHECK(s.gamma == doctest::Approx(0.0).scale(1).epsilon(1e-13));
    CHECK(s.gamma_alt == doctest::Approx(0.0).scale(1).epsilon(1e-13));
    CHECK(s.theta == doctest::Approx(0.797885).epsilon(1e-5));
    CHECK(s.theta == doctest::Approx(oracle::integrate(
                         [](double y) { return std::fabs(y) * sf::normal_pdf(y); },
                         -INFINITY, INFINITY)).epsilon(1e-10));
    CHECK(s.F_med_plus_xi - s.F_med_minus_xi == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(s.beta > 0.0);
    CHECK(s.e_y3.has_value());
    CHECK(s.e_y4.has_value());
    CHECK(*s.e_y4 == doctest::Approx(3.0).epsilon(1e-12));

    const auto& s3 = Distribution::student(3.0).summary();
    CHECK_FALSE(s3.e_y4.has_value());
    CHECK_FALSE(s3.e_y3.has_value());
    CHECK(s3.F_med_plus_xi - s3.F_med_minus_xi == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("asymmetric custom distribution separates the two gamma variants") {
    // Base: standard exponential (asymmetric).
    CustomSpec spec;
    spec.cdf = [](double x) { return x <= 0.0 ? 0.0 : 1.0 - std::exp(-x); };
    spec.pdf = [](double x) { return x <= 0.0 ? 0.0 : std::exp(-x); };
    spec.name = "exponential";
    const auto e = Distribution::custom(spec);
    CHECK(e.mean() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(e.stddev() == doctest::Approx(1.0).epsilon(1e-8));
    const auto& s = e.summary();
    CHECK(std::fabs(s.alpha) > 1e-3);
    CHECK(s.gamma != doctest::Approx(s.gamma_alt).epsilon(1e-3));
    CHECK(s.med == doctest::Approx(std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("custom wrapper reproduces the gaussian") {
    const auto c = custom_gaussian();
    const auto g = Distribution::gaussian();
    CHECK(c.mean() == doctest::Approx(0.0).scale(1).epsilon(1e-9));
    CHECK(c.stddev() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(c.quantile(0.95) == doctest::Approx(g.quantile(0.95)).epsilon(1e-9));
    CHECK(c.partial_expectation(2, -1.0, 2.0) ==
          doctest::Approx(g.partial_expectation(2, -1.0, 2.0)).epsilon(1e-8));
    // Quadrature-path standardization for a custom family.
    CHECK(c.partial_expectation(1, -INFINITY, INFINITY) ==
          doctest::Approx(0.0).scale(1).epsilon(1e-9));
    CHECK(c.partial_expectation(2, -INFINITY, INFINITY) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("summary initialization is race free") {
    const auto t5 = Distribution::student(5.0);
    std::vector<std::thread> pool;
    std::vector<double> xi(8);
    for (int t = 0; t < 8; ++t)
        pool.emplace_back([&, t] { xi[static_cast<std::size_t>(t)] = t5.summary().xi; });
    for (auto& th : pool) th.join();
    for (int t = 1; t < 8; ++t) CHECK(xi[static_cast<std::size_t>(t)] == xi[0]);
}

TEST_CASE("location-scale consistency and round trips") {
    const auto base = Distribution::gaussian();
    const auto shifted = Distribution::gaussian(-1.0, 0.5);
    const auto t10 = Distribution::student(10.0);
    for (int i = 1; i <= 99; ++i) {
        const double p = i / 100.0;
        CHECK(shifted.quantile(p) ==
              doctest::Approx(-1.0 + 0.5 * base.quantile(p)).epsilon(1e-12));
        CHECK(base.cdf(base.quantile(p)) == doctest::Approx(p).epsilon(1e-10));
        CHECK(t10.cdf(t10.quantile(p)) == doctest::Approx(p).epsilon(1e-10));
    }
}

TEST_CASE("student converges to the gaussian for huge df") {
    const auto t = Distribution::student(1e6);
    const auto g = Distribution::gaussian();
    for (int k = 1; k <= 6; ++k)
        CHECK(t.standardized_moment(k) ==
              doctest::Approx(g.standardized_moment(k)).scale(1).epsilon(1e-3));
    CHECK(t.abs_moment(1) == doctest::Approx(g.abs_moment(1)).epsilon(1e-3));
    CHECK(t.quantile(0.95) == doctest::Approx(g.quantile(0.95)).epsilon(1e-3));
}
