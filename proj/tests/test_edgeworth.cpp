#include "levyedge/edgeworth.hpp"

#include "levyedge/errors.hpp"
#include "levyedge/oracles.hpp"
#include "levyedge/quadrature.hpp"
#include "levyedge/rng.hpp"
#include "levyedge/special_functions.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

using namespace levyedge;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

LevyTriplet uniform_gauss_model() {
    DensityPiece piece;
    piece.lo = 0.0;
    piece.hi = 1.0;
    piece.poly = {5.0};
    LevyMeasure m;
    m.density_pieces.push_back(std::move(piece));
    return LevyTriplet(1.0, 0.0, std::move(m), false);
}

LevyTriplet gamma_tail_model() {
    DensityPiece piece;
    piece.lo = 0.01;
    piece.hi = inf;
    piece.poly = {1.0};
    piece.exp_poly = {0.0, -1.0};
    piece.power = -1.0;
    LevyMeasure m;
    m.density_pieces.push_back(std::move(piece));
    return LevyTriplet(0.0, 0.0, std::move(m), false);
}

SeriesGate open_gate() { return {true, false}; }

// The displayed low-order correction polynomials, at unit variance.
double q1_reference(double x, double l3) {
    return -std_normal_pdf(x) * (x * x - 1.0) * l3 / 6.0;
}
double q2_reference(double x, double l3, double l4) {
    const double h5 = ((x * x - 10.0) * x * x + 15.0) * x;
    const double h3 = (x * x - 3.0) * x;
    return -std_normal_pdf(x) * (h5 * l3 * l3 / 72.0 + h3 * l4 / 24.0);
}
double q3_reference(double x, double l3, double l4, double l5) {
    const double x2 = x * x;
    const double h8 = ((((x2 - 28.0) * x2 + 210.0) * x2 - 420.0) * x2) + 105.0;
    const double h6 = ((x2 - 15.0) * x2 + 45.0) * x2 - 15.0;
    const double h4 = (x2 - 6.0) * x2 + 3.0;
    return -std_normal_pdf(x) *
           (h8 * l3 * l3 * l3 / 1296.0 + h6 * l3 * l4 / 144.0 + h4 * l5 / 120.0);
}

} // namespace

TEST_CASE("q_function pinned values") {
    const auto skew = CumulantSet::from_gammas({1.0, 1.0});
    CHECK(q_function(skew, 1, 0.0) == doctest::Approx(0.066490380066905).epsilon(1e-12));

    const auto gauss = CumulantSet::from_gammas({1.0, 0.0, 0.0, 0.0, 0.0});
    for (int nu = 1; nu <= 3; ++nu)
        for (double x : {-2.0, 0.0, 1.5}) CHECK(q_function(gauss, nu, x) == 0.0);

    const auto both = CumulantSet::from_gammas({1.0, 1.0, 1.0});
    CHECK(q_function(both, 2, 0.0) == 0.0);  // odd Hermite orders vanish at 0
}

TEST_CASE("q_function matches the displayed low-order polynomials") {
    const double l3 = 0.5, l4 = -0.3, l5 = 1.25;
    const auto cs = CumulantSet::from_gammas({1.0, l3, l4, l5});
    for (double x : {-3.0, -1.2, -0.4, 0.0, 0.7, 1.0, 2.5}) {
        const double tol = 1e-12;
        const double r1 = q1_reference(x, l3);
        const double r2 = q2_reference(x, l3, l4);
        const double r3 = q3_reference(x, l3, l4, l5);
        CHECK(std::abs(q_function(cs, 1, x) - r1) <= tol * std::max(1.0, std::abs(r1)));
        CHECK(std::abs(q_function(cs, 2, x) - r2) <= tol * std::max(1.0, std::abs(r2)));
        CHECK(std::abs(q_function(cs, 3, x) - r3) <= tol * std::max(1.0, std::abs(r3)));
    }
}

TEST_CASE("q_coefficients reproduce the displayed rational weights") {
    const auto cs = CumulantSet::from_gammas({1.0, 1.0, 1.0, 1.0});
    const auto q1 = q_coefficients(cs, 1);
    REQUIRE(q1.size() == 1);
    CHECK(q1[0].hermite_order == 2);
    CHECK(q1[0].value == doctest::Approx(1.0 / 6.0).epsilon(1e-12));

    const auto q2 = q_coefficients(cs, 2);
    REQUIRE(q2.size() == 2);
    CHECK(q2[0].l == 1);
    CHECK(q2[0].hermite_order == 3);
    CHECK(q2[0].value == doctest::Approx(1.0 / 24.0).epsilon(1e-12));
    CHECK(q2[1].l == 2);
    CHECK(q2[1].hermite_order == 5);
    CHECK(q2[1].value == doctest::Approx(1.0 / 72.0).epsilon(1e-12));

    const auto q3 = q_coefficients(cs, 3);
    REQUIRE(q3.size() == 3);
    CHECK(q3[0].hermite_order == 4);
    CHECK(q3[0].value == doctest::Approx(1.0 / 120.0).epsilon(1e-12));
    CHECK(q3[1].hermite_order == 6);
    CHECK(q3[1].value == doctest::Approx(1.0 / 144.0).epsilon(1e-12));
    CHECK(q3[2].hermite_order == 8);
    CHECK(q3[2].value == doctest::Approx(1.0 / 1296.0).epsilon(1e-12));
}

TEST_CASE("q_derivative pinned values and finite differences") {
    const auto skew = CumulantSet::from_gammas({1.0, 1.0});
    CHECK(q_derivative(skew, 1, 0.0) == 0.0);  // H_3(0) = 0

    const auto gauss = CumulantSet::from_gammas({1.0, 0.0, 0.0});
    CHECK(q_derivative(gauss, 1, 1.3) == 0.0);

    const auto cs = cumulant_set(uniform_gauss_model(), 10, 5.0);
    const double h = 1e-5;
    for (int nu = 1; nu <= 8; ++nu) {
        for (double x : {-2.5, -1.0, 0.3, 1.7, 3.0}) {
            const double fd = (q_function(cs, nu, x + h) - q_function(cs, nu, x - h)) / (2.0 * h);
            const double exact = q_derivative(cs, nu, x);
            CHECK(std::abs(fd - exact) <= 1e-6 * std::max(1e-6, std::abs(exact)));
        }
    }
}

TEST_CASE("scaling in t: q at time t equals t^{-nu/2} times q at time 1") {
    Xoshiro256pp rng(5150);
    const auto triplet = uniform_gauss_model();
    const auto base = cumulant_set(triplet, 10, 1.0);
    for (double t : {0.5, 1.0, 4.0, 100.0}) {
        const auto at_t = cumulant_set(triplet, 10, t);
        for (int nu = 1; nu <= 10; ++nu) {
            for (int rep = 0; rep < 20; ++rep) {
                const double x = rng.uniform_in(-5.0, 5.0);
                const double lhs = q_function(at_t, nu, x);
                const double rhs = std::pow(t, -0.5 * nu) * q_function(base, nu, x);
                CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(std::abs(lhs), std::abs(rhs)));
            }
        }
    }
}

TEST_CASE("parity of the correction terms") {
    const auto cs = cumulant_set(uniform_gauss_model(), 12, 2.0);
    for (int nu = 1; nu <= 12; ++nu) {
        for (double x : {0.4, 1.1, 2.7}) {
            const double plus = q_function(cs, nu, x);
            const double minus = q_function(cs, nu, -x);
            const double expected = nu % 2 == 0 ? 2.0 * plus : 0.0;
            CHECK(std::abs(plus - minus - expected) <= 1e-12 * std::max(1.0, std::abs(plus)));
        }
    }
}

TEST_CASE("cdf_truncated basics") {
    const auto gauss = cumulant_set(LevyTriplet(1.0, 0.0, LevyMeasure{}, false), 10, 3.0);
    for (int order = 0; order <= 10; ++order)
        for (double x : {-4.0, -1.0, 0.0, 0.5, 3.0}) {
            const auto res = cdf_truncated(gauss, x, order);
            CHECK(res.value == std_normal_cdf(x));
            CHECK(res.n_terms_used == order);
        }

    // order 1 at x = 0 with lambda_3 of the time-t law equal to c
    const double t = 4.0;
    const auto cs = CumulantSet::from_base({1.0, 0.6}, t);
    const double c = 0.6 * std::pow(t, -0.5);
    const auto res = cdf_truncated(cs, 0.0, 1);
    CHECK(res.value ==
          doctest::Approx(0.5 + std_normal_pdf(0.0) * c / 6.0).epsilon(1e-12));

    // re-summation invariant
    const auto ug = cumulant_set(uniform_gauss_model(), 10, 5.0);
    const auto full = cdf_truncated(ug, 1.3, 10);
    double acc = full.base;
    for (double term : full.terms) acc += term;
    CHECK(acc == full.value);
    CHECK_THROWS_AS(cdf_truncated(ug, 0.0, 11), std::invalid_argument);
}

TEST_CASE("two evaluation paths of the truncated expansion agree") {
    const auto triplet = uniform_gauss_model();
    const auto base = cumulant_set(triplet, 10, 1.0);
    for (double t : {0.5, 4.0, 25.0}) {
        const auto at_t = cumulant_set(triplet, 10, t);
        for (double x : {-2.0, -0.3, 0.9, 2.2}) {
            const auto direct = cdf_truncated(at_t, x, 10);
            double rescaled = std_normal_cdf(x);
            for (int nu = 1; nu <= 10; ++nu)
                rescaled += std::pow(t, -0.5 * nu) * q_function(base, nu, x);
            CHECK(std::abs(direct.value - rescaled) <= 1e-12);
        }
    }
}

TEST_CASE("truncated expansion tracks the inversion oracle at order 10") {
    const auto triplet = uniform_gauss_model();
    const auto cs = cumulant_set(triplet, 10, 5.0);
    for (double x : {-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0}) {
        const auto approx = cdf_truncated(cs, x, 10);
        const auto oracle = cf_inversion_cdf(triplet, 5.0, x);
        REQUIRE(oracle.error_bound <= 1e-7);
        CHECK(std::abs(approx.value - oracle.value) <= 5e-4);
    }
}

TEST_CASE("exact series on a mixed measure matches the inversion oracle") {
    // atoms on both sides plus a uniform density and a Gaussian part
    LevyMeasure m;
    m.atoms.push_back({-0.5, 0.7});
    m.atoms.push_back({1.0, 0.3});
    DensityPiece piece;
    piece.lo = 0.0;
    piece.hi = 1.0;
    piece.poly = {2.0};
    m.density_pieces.push_back(piece);
    const LevyTriplet triplet(0.5, 0.0, std::move(m), false);
    const auto report = check_conditions(triplet);
    CHECK(report.strongest == SeriesBasis::bounded_support);
    const auto cs = cumulant_set(triplet, 40, 4.0);
    SeriesOptions opts;
    const auto gate = series_gate(report);
    for (auto [x1, x2] : {std::pair{-2.0, 1.0}, {-1.0, -0.25}, {0.5, 3.0}}) {
        const auto series = cdf_difference_exact(cs, x1, x2, opts, gate);
        const auto oracle = cf_inversion_cdf_diff(triplet, 4.0, x1, x2);
        CHECK(series.verdict == SeriesVerdict::converged);
        CHECK(std::abs(series.value - oracle.value) <= 1e-6 + oracle.error_bound);
    }
}

TEST_CASE("exact series: gate and Gaussian short-circuit") {
    const auto gauss = cumulant_set(LevyTriplet(1.0, 0.0, LevyMeasure{}, false), 10, 1.0);
    SeriesOptions opts;
    CHECK_THROWS_AS(cdf_difference_exact(gauss, -1.0, 1.0, opts, SeriesGate{false, false}),
                    condition_gate_error);
    const auto res = cdf_difference_exact(gauss, -1.0, 1.0, opts, open_gate());
    CHECK(res.verdict == SeriesVerdict::converged);
    CHECK(res.n_terms_used == 1);
    CHECK(res.value == doctest::Approx(std_normal_cdf(1.0) - std_normal_cdf(-1.0)).epsilon(1e-15));
    CHECK_THROWS_AS(cdf_difference_exact(gauss, 1.0, -1.0, opts, open_gate()),
                    std::invalid_argument);
}

TEST_CASE("exact series converges on the bounded-support model") {
    const auto triplet = uniform_gauss_model();
    const auto gate = series_gate(check_conditions(triplet));
    CHECK(gate.certified);
    SeriesOptions opts;
    int prev_terms = 61;
    for (double t : {5.0, 25.0, 100.0}) {
        const auto cs = cumulant_set(triplet, 40, t);
        const auto res = cdf_difference_exact(cs, -1.3, 2.1, opts, gate);
        CHECK(res.verdict == SeriesVerdict::converged);
        CHECK(std::abs(res.terms.back()) <= opts.tol);
        CHECK(res.n_terms_used <= prev_terms);
        prev_terms = res.n_terms_used;
        CHECK(res.value == doctest::Approx(res.base + [&] {
                  double s = 0.0;
                  for (double v : res.terms) s += v;
                  return s;
              }()).epsilon(1e-15));
    }
}

TEST_CASE("negative control: growing terms are flagged diverging") {
    const auto triplet = gamma_tail_model();
    const auto report = check_conditions(triplet);
    CHECK_FALSE(exact_series_certified(report));
    const auto cs = cumulant_set(triplet, 40, 1.0);
    SeriesOptions opts;
    CHECK_THROWS_AS(cdf_difference_exact(cs, 0.0, 1.0, opts, series_gate(report)),
                    condition_gate_error);
    opts.override_conditions = true;
    const auto res = cdf_difference_exact(cs, 0.0, 1.0, opts, series_gate(report, true));
    CHECK(res.verdict == SeriesVerdict::diverging);
    CHECK(res.tail_estimate == inf);
}

TEST_CASE("absolute-value law identities") {
    const auto triplet = uniform_gauss_model();
    const auto cs = cumulant_set(triplet, 40, 5.0);
    const auto gate = series_gate(check_conditions(triplet));
    SeriesOptions opts;
    for (double x : {0.5, 1.0, 2.0}) {
        const auto abs_res = abs_cdf(cs, x, opts, gate);
        const auto diff_res = cdf_difference_exact(cs, -x, x, opts, gate);
        CHECK(abs_res.verdict == SeriesVerdict::converged);
        CHECK(std::abs(abs_res.value - diff_res.value) <= 1e-12);
        const auto tail_res = abs_tail(cs, x, opts, gate);
        CHECK(std::abs(abs_res.value + tail_res.value - 1.0) <= 1e-12);
    }
    CHECK_THROWS_AS(abs_cdf(cs, -1.0, opts, gate), std::invalid_argument);
    CHECK_THROWS_AS(abs_cdf(cs, 0.0, opts, gate), std::invalid_argument);
}

TEST_CASE("density series") {
    const auto gauss = cumulant_set(LevyTriplet(1.0, 0.0, LevyMeasure{}, false), 10, 1.0);
    SeriesOptions opts;
    const auto at = pdf_series(gauss, 0.7, opts, open_gate(), true);
    CHECK(at.value == std_normal_pdf(0.7));
    CHECK(at.verdict == SeriesVerdict::converged);

    CHECK_THROWS_AS(pdf_series(gauss, 0.0, opts, open_gate(), false), condition_gate_error);

    // finite difference of the truncated CDF matches the density series
    const auto cs = cumulant_set(uniform_gauss_model(), 12, 5.0);
    const double h = 1e-4;
    for (double x : {-2.0, -0.5, 0.6, 1.8, 3.0}) {
        const auto dens = pdf_series(cs, x, opts, open_gate(), true);
        CHECK(dens.verdict == SeriesVerdict::converged);
        const double fd = (cdf_truncated(cs, x + h, 10).value -
                           cdf_truncated(cs, x - h, 10).value) /
                          (2.0 * h);
        CHECK(std::abs(dens.value - fd) <= 1e-4);
    }
}

TEST_CASE("one-sided law of a spectrally positive model") {
    // compensated compound Poisson, rate 5, uniform(0,1] jumps
    DensityPiece piece;
    piece.lo = 0.0;
    piece.hi = 1.0;
    piece.poly = {5.0};
    LevyMeasure mu;
    mu.density_pieces.push_back(std::move(piece));
    const LevyTriplet cp(0.0, 0.0, std::move(mu), false);
    const auto report = check_conditions(cp);
    CHECK(exact_series_certified(report));
    SeriesOptions opts;
    opts.tol = 1e-9;

    // support of X_5 starts at -t int u mu(du) / V_t
    const auto below = one_sided_cdf(cp, report, 5.0, -5.0, opts);
    CHECK(below.value == 0.0);
    CHECK(below.verdict == SeriesVerdict::converged);

    const auto all_mass = one_sided_cdf(cp, report, 5.0, 12.0, opts);
    CHECK(all_mass.value == doctest::Approx(1.0).epsilon(1e-6));

    for (double x2 : {-1.0, 0.0, 1.0, 2.0}) {
        const auto series = one_sided_cdf(cp, report, 5.0, x2, opts);
        const auto mc = simulate_cdf(cp, 5.0, x2, 1000000, 20260811);
        CHECK(std::abs(series.value - mc.value) <= 3.0 * mc.std_error + 1e-6);
    }

    LevyMeasure neg;
    neg.atoms.push_back({-1.0, 1.0});
    const LevyTriplet bad(0.0, 0.0, std::move(neg), true);
    CHECK_THROWS_AS(one_sided_cdf(bad, check_conditions(bad), 1.0, 0.0, opts),
                    std::invalid_argument);
}

TEST_CASE("iid sum expansion") {
    // centered exponential(1): gamma_nu = (nu-1)!
    const auto expo = CumulantSet::from_gammas({1.0, 2.0, 6.0});
    CHECK_THROWS_AS(iid_sum_cdf(expo, 50, 0.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(iid_sum_cdf(expo, 50, 0.0, 6), std::invalid_argument);

    // explicit n^{-nu/2} scaling: with k = 3 the single correction halves
    // when n quadruples
    for (double x : {-1.0, 0.2, 1.4}) {
        const double delta_n = iid_sum_cdf(expo, 50, x, 3) - std_normal_cdf(x);
        const double delta_4n = iid_sum_cdf(expo, 200, x, 3) - std_normal_cdf(x);
        CHECK(delta_4n == doctest::Approx(0.5 * delta_n).epsilon(1e-13));
    }

    // symmetric summand: no third cumulant, k = 3 reduces to the normal law
    const auto sym = CumulantSet::from_gammas({1.0, 0.0});
    for (double x : {-2.0, 0.0, 0.9}) CHECK(iid_sum_cdf(sym, 10, x, 3) == std_normal_cdf(x));

    // exponential summands against the exact shifted-Gamma law
    const int n = 50;
    double worst_k4 = 0.0, worst_k3 = 0.0;
    for (int i = 0; i <= 25; ++i) {
        const double x = -2.0 + 5.0 * i / 25.0;
        const double exact = gamma_cdf(n, n + std::sqrt(static_cast<double>(n)) * x);
        worst_k4 = std::max(worst_k4, std::abs(iid_sum_cdf(expo, n, x, 4) - exact));
        worst_k3 = std::max(worst_k3, std::abs(iid_sum_cdf(expo, n, x, 3) - exact));
    }
    CHECK(worst_k4 <= 5e-3);
    CHECK(worst_k4 < worst_k3);
}
