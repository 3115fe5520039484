#include "levyedge/errors.hpp"
#include "levyedge/quadrature.hpp"

#include <doctest.h>

#include <cmath>

using namespace levyedge;

TEST_CASE("finite integrals") {
    const auto poly = integrate_finite([](double x) { return x * x * x - 2.0 * x + 1.0; }, -1.0, 2.0);
    CHECK(poly.value == doctest::Approx(3.75).epsilon(1e-13));  // x^4/4 - x^2 + x
    const auto osc = integrate_finite([](double x) { return std::cos(7.0 * x); }, 0.0, 3.0);
    CHECK(osc.value == doctest::Approx(std::sin(21.0) / 7.0).epsilon(1e-12));
    CHECK(integrate_finite([](double) { return 1.0; }, 2.0, 2.0).value == 0.0);
}

TEST_CASE("right tail integrals") {
    // int_0^inf x^3 e^{-x} = 6
    const auto m3 = integrate_right_tail([](double x) { return x * x * x * std::exp(-x); }, 0.0);
    CHECK(m3.value == doctest::Approx(6.0).epsilon(1e-11));
    // int_1^inf e^{-x^2} = sqrt(pi)/2 erfc(1)
    const double pi = 3.14159265358979323846;
    const auto g = integrate_right_tail([](double x) { return std::exp(-x * x); }, 1.0);
    CHECK(g.value == doctest::Approx(0.5 * std::sqrt(pi) * std::erfc(1.0)).epsilon(1e-11));
}

TEST_CASE("left tail mirrors right tail") {
    const auto l = integrate_left_tail([](double x) { return std::exp(x); }, -2.0);
    CHECK(l.value == doctest::Approx(std::exp(-2.0)).epsilon(1e-11));
}

TEST_CASE("integrable endpoint singularity at zero") {
    // int_0^1 x^{-1/2} = 2
    const auto s = integrate_from_zero([](double x) { return 1.0 / std::sqrt(x); }, 1.0);
    CHECK(s.value == doctest::Approx(2.0).epsilon(1e-11));
}

TEST_CASE("divergent integrals are detected") {
    CHECK_THROWS_AS(integrate_from_zero([](double x) { return 1.0 / x; }, 1.0), moment_error);
    CHECK_THROWS_AS(integrate_right_tail([](double x) { return 1.0 / x; }, 1.0), moment_error);
    CHECK_THROWS_AS(integrate_right_tail([](double x) { return std::exp(0.1 * x); }, 0.0),
                    moment_error);
}
