#include "levyedge/quadrature.hpp"
#include "levyedge/rng.hpp"
#include "levyedge/special_functions.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

using namespace levyedge;

TEST_CASE("hermite small orders") {
    CHECK(hermite(0, 7.3) == 1.0);
    CHECK(hermite(1, -2.5) == -2.5);
    CHECK(hermite(2, 2.0) == 3.0);
    // even orders at 0: (-1)^m (2m-1)!!
    CHECK(hermite(4, 0.0) == 3.0);
    CHECK(hermite(6, 0.0) == -15.0);
    // explicit degree-5 polynomial
    for (double x : {-3.0, -0.5, 0.25, 1.0, 4.0}) {
        const double expected = ((x * x - 10.0) * x * x + 15.0) * x;
        CHECK(hermite(5, x) == doctest::Approx(expected).epsilon(1e-13));
    }
}

TEST_CASE("hermite_row matches single evaluations bitwise") {
    const auto row = hermite_row(3, 1.0);
    REQUIRE(row.size() == 4);
    CHECK(row[0] == 1.0);
    CHECK(row[1] == 1.0);
    CHECK(row[2] == 0.0);
    CHECK(row[3] == -2.0);
    CHECK(hermite_row(1, 0.0) == std::vector<double>{1.0, 0.0});

    Xoshiro256pp rng(12345);
    for (int rep = 0; rep < 20; ++rep) {
        const double x = rng.uniform_in(-10.0, 10.0);
        const auto r = hermite_row(40, x);
        for (int k = 0; k <= 40; ++k) CHECK(r[static_cast<std::size_t>(k)] == hermite(k, x));
    }
}

TEST_CASE("hermite recurrence holds bitwise") {
    Xoshiro256pp rng(99);
    for (int n = 1; n <= 30; ++n) {
        for (int rep = 0; rep < 100; ++rep) {
            const double x = rng.uniform_in(-10.0, 10.0);
            const double lhs = hermite(n + 1, x);
            const double rhs = x * hermite(n, x) - n * hermite(n - 1, x);
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("hermite derivative identity vs finite differences") {
    const double h = 1e-5;
    Xoshiro256pp rng(7);
    for (int n = 1; n <= 15; ++n) {
        for (int rep = 0; rep < 20; ++rep) {
            const double x = rng.uniform_in(-5.0, 5.0);
            const double fd = (hermite(n, x + h) - hermite(n, x - h)) / (2.0 * h);
            const double exact = n * hermite(n - 1, x);
            CHECK(std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
        }
    }
}

TEST_CASE("hermite parity") {
    Xoshiro256pp rng(21);
    for (int n = 0; n <= 30; ++n) {
        for (int rep = 0; rep < 20; ++rep) {
            const double x = rng.uniform_in(0.0, 8.0);
            const double sign = (n % 2 == 0) ? 1.0 : -1.0;
            const double lhs = hermite(n, -x);
            const double rhs = sign * hermite(n, x);
            CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
        }
    }
}

TEST_CASE("hermite argument validation") {
    CHECK_THROWS_AS(hermite(-1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(hermite(hermite_max_order + 1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(hermite(3, std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
    CHECK_THROWS_AS(hermite(3, std::numeric_limits<double>::infinity()), std::invalid_argument);
    CHECK(std::isfinite(hermite(hermite_max_order, 10.0)));
}

TEST_CASE("normal cdf basics") {
    CHECK(std_normal_cdf(0.0) == 0.5);
    CHECK(std_normal_cdf(std::numeric_limits<double>::infinity()) == 1.0);
    CHECK(std_normal_cdf(-std::numeric_limits<double>::infinity()) == 0.0);
    CHECK_THROWS_AS(std_normal_cdf(std::numeric_limits<double>::quiet_NaN()),
                    std::invalid_argument);
}

TEST_CASE("normal cdf vs quadrature of the density") {
    // Independent reference: 1/2 + integral of the density from 0 to x.
    QuadratureOptions opt;
    opt.rel_tol = 1e-14;
    for (double x : {0.25, 0.5, 1.0, 1.7, 2.5, 3.5}) {
        const auto ref = integrate_finite([](double u) { return std_normal_pdf(u); }, 0.0, x, opt);
        CHECK(std::abs(std_normal_cdf(x) - (0.5 + ref.value)) <= 1e-13);
    }
}

TEST_CASE("normal cdf monotone and symmetric") {
    double prev = 0.0;
    for (int i = 0; i <= 120; ++i) {
        const double x = -6.0 + 0.1 * i;
        const double p = std_normal_cdf(x);
        CHECK(p >= prev);
        prev = p;
        CHECK(std::abs(std_normal_cdf(x) + std_normal_cdf(-x) - 1.0) <= 1e-15);
    }
}

TEST_CASE("normal pdf") {
    CHECK(std_normal_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
    for (double x : {0.3, 1.0, 2.2, 17.0}) CHECK(std_normal_pdf(x) == std_normal_pdf(-x));
    const double far = std_normal_pdf(40.0);
    CHECK(far >= 0.0);
    CHECK(far < 1e-300);
}
