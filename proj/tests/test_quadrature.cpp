#include <doctest.h>

#include <cmath>

#include "qdcor/errors.hpp"
#include "qdcor/quadrature.hpp"
#include "qdcor/special_functions.hpp"
#include "oracle_quadrature.hpp"

using namespace qdcor;

TEST_CASE("gaussian mass and moments over the real line") {
    auto phi = [](double y) { return sf::normal_pdf(y); };
    CHECK(integrate(phi, -INFINITY, INFINITY) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(integrate([&](double y) { return y * y * sf::normal_pdf(y); }, -INFINITY,
                    INFINITY) == doctest::Approx(1.0).epsilon(1e-12));
    // Known tail identity: int_q^inf y phi(y) dy = phi(q).
    const double q = 1.6448536269514722;
    CHECK(integrate([&](double y) { return y * sf::normal_pdf(y); }, q, INFINITY) ==
          doctest::Approx(sf::normal_pdf(q)).epsilon(1e-12));
}

TEST_CASE("agrees with the independent Simpson oracle") {
    auto f = [](double y) { return std::exp(-std::fabs(y)) * std::cos(y); };
    CHECK(integrate(f, -INFINITY, INFINITY) ==
          doctest::Approx(oracle::integrate(f, -INFINITY, INFINITY)).epsilon(1e-10));
    auto g = [](double y) { return y * y * y * std::exp(-y * y / 3.0); };
    CHECK(integrate(g, -1.0, 4.0) ==
          doctest::Approx(oracle::integrate_finite(g, -1.0, 4.0)).epsilon(1e-11));
}

TEST_CASE("heavy tails converge") {
    // Unit-variance Student(3): second moment 1, integrand decays like y^-2.
    const double s = std::sqrt(1.0 / 3.0);
    auto fy = [s](double y) { return sf::student_pdf(y / s, 3.0) / s; };
    CHECK(integrate([&](double y) { return y * y * fy(y); }, -INFINITY, INFINITY) ==
          doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("interval handling") {
    auto phi = [](double y) { return sf::normal_pdf(y); };
    CHECK(integrate(phi, 2.0, 2.0) == 0.0);
    CHECK_THROWS_AS(integrate(phi, 1.0, -1.0), std::domain_error);
    // Additivity across a split point.
    const double whole = integrate(phi, -1.0, 2.5);
    const double parts = integrate(phi, -1.0, 0.7) + integrate(phi, 0.7, 2.5);
    CHECK(whole == doctest::Approx(parts).epsilon(1e-12));
}
