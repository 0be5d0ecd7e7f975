#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "wfrec/quadrature.hpp"

using wfrec::integrate;

TEST_CASE("polynomial integrals are exact to tolerance") {
    CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK(integrate([](double x) { return 6.0 * x * (1.0 - x); }, 0.0, 1.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(integrate([](double) { return 2.5; }, -1.0, 3.0) ==
          doctest::Approx(10.0).epsilon(1e-14));
}

TEST_CASE("smooth transcendental integrands") {
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, 2.0) ==
          doctest::Approx(1.0 - std::cos(2.0)).epsilon(1e-12));
    CHECK(integrate([](double x) { return std::exp(-x); }, 0.0, 10.0) ==
          doctest::Approx(1.0 - std::exp(-10.0)).epsilon(1e-12));
}

TEST_CASE("oscillatory integrand is resolved by adaptive bisection") {
    const double value =
        integrate([](double x) { return std::sin(10.0 * x); }, 0.0,
                  2.0 * 3.14159265358979323846);
    CHECK(std::abs(value) <= 1e-10);
}

TEST_CASE("integrable endpoint singularity converges") {
    // int_0^1 x^{-1/2} dx = 2; the integrand blows up at 0 but every
    // quadrature node is interior, and bisection refines toward the end.
    const double value =
        integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-10);
    CHECK(value == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("invalid arguments are rejected") {
    CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 1.0, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 2.0, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 0.0, 1.0, 0.0),
                    std::invalid_argument);
}
