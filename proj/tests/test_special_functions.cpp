#include <doctest.h>

#include <cmath>

#include "qdcor/special_functions.hpp"
#include "oracle_quadrature.hpp"

using namespace qdcor;

TEST_CASE("normal cdf/pdf basics") {
    CHECK(sf::normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(sf::normal_pdf(0.0) == doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)).epsilon(1e-15));
    for (double x : {-3.0, -1.2, 0.4, 2.5, 6.0})
        CHECK(sf::normal_cdf(x) + sf::normal_cdf(-x) == doctest::Approx(1.0).epsilon(1e-14));
    // cdf is the integral of the pdf
    const double num = oracle::integrate([](double y) { return sf::normal_pdf(y); },
                                         -INFINITY, 1.3);
    CHECK(num == doctest::Approx(sf::normal_cdf(1.3)).epsilon(1e-11));
}

TEST_CASE("normal quantile inverts the cdf") {
    CHECK(sf::normal_quantile(0.5) == 0.0);
    for (double p : {1e-9, 1e-4, 0.01, 0.2, 0.5, 0.8, 0.95, 0.999, 1 - 1e-9}) {
        const double x = sf::normal_quantile(p);
        CHECK(sf::normal_cdf(x) == doctest::Approx(p).epsilon(1e-12));
    }
    CHECK(sf::normal_quantile(0.95) ==
          doctest::Approx(oracle::normal_quantile_bisect(0.95)).epsilon(1e-13));
    CHECK(std::isnan(sf::normal_quantile(0.0)));
    CHECK(std::isnan(sf::normal_quantile(1.0)));
}

TEST_CASE("regularized incomplete beta") {
    for (double x : {0.05, 0.3, 0.5, 0.77, 0.98})
        for (double a : {0.5, 1.5, 4.0})
            for (double b : {0.5, 2.5}) {
                const double lhs = sf::regularized_incomplete_beta(x, a, b);
                const double rhs = sf::regularized_incomplete_beta(1.0 - x, b, a);
                CHECK(lhs + rhs == doctest::Approx(1.0).epsilon(1e-12));
            }
    CHECK(sf::regularized_incomplete_beta(0.0, 2.0, 3.0) == 0.0);
    CHECK(sf::regularized_incomplete_beta(1.0, 2.0, 3.0) == 1.0);
    // I_x(1,1) = x
    CHECK(sf::regularized_incomplete_beta(0.37, 1.0, 1.0) == doctest::Approx(0.37).epsilon(1e-13));
}

TEST_CASE("student cdf matches the integrated pdf") {
    for (double df : {3.0, 5.0, 12.5}) {
        CHECK(sf::student_cdf(0.0, df) == 0.5);
        for (double t : {-2.3, -0.7, 0.9, 2.0150483726624478}) {
            const double num = oracle::integrate(
                [df](double y) { return sf::student_pdf(y, df); }, -INFINITY, t);
            CHECK(sf::student_cdf(t, df) == doctest::Approx(num).epsilon(1e-10));
        }
    }
}

TEST_CASE("student quantile inverts the cdf") {
    for (double df : {3.0, 5.0, 30.0})
        for (double p : {0.01, 0.25, 0.5, 0.75, 0.95, 0.999}) {
            const double t = sf::student_quantile(p, df);
            CHECK(sf::student_cdf(t, df) == doctest::Approx(p).epsilon(1e-10));
        }
    // Large df approaches the normal quantile.
    CHECK(sf::student_quantile(0.95, 1e7) ==
          doctest::Approx(sf::normal_quantile(0.95)).epsilon(1e-5));
}
