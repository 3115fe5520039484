#include "levyedge/oracles.hpp"

#include "levyedge/detail/stable_kernels.hpp"
#include "levyedge/errors.hpp"
#include "levyedge/quadrature.hpp"
#include "levyedge/rng.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

namespace levyedge {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double pi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// characteristic-function inversion

struct CfSetup {
    double v_t = 0.0;        // sqrt(gamma_2 at time t)
    double gauss_rate = 0.0; // |f(s)| <= exp(-gauss_rate s^2)
};

CfSetup cf_setup(const LevyTriplet& triplet, double t) {
    CfSetup setup;
    const double gamma2 = cumulant(triplet, 2, t);
    setup.v_t = std::sqrt(gamma2);
    setup.gauss_rate = triplet.sigma2() / (2.0 * (gamma2 / t));
    return setup;
}

// Re[(e^{-is x2} - e^{-is x1})/(-is) * f(s)] with f = exp(t psi(s/V_t)).
// Sine/cosine differences go through product identities to keep small-s
// evaluations exact.
double inversion_integrand(const LevyTriplet& triplet, double t, const CfSetup& setup, double x1,
                           double x2, double s) {
    const std::complex<double> f = std::exp(t * characteristic_exponent(triplet, s / setup.v_t));
    const double half_sum = 0.5 * s * (x2 + x1);
    const double half_diff = 0.5 * s * (x2 - x1);
    const double ds = 2.0 * std::cos(half_sum) * std::sin(half_diff);
    const double dc = -2.0 * std::sin(half_sum) * std::sin(half_diff);
    return (ds * f.real() - dc * f.imag()) / s;
}

OracleEstimate cf_inversion_impl(const LevyTriplet& triplet, double t, double x1, double x2) {
    if (!(x1 <= x2))
        throw std::invalid_argument("cf inversion: need x1 <= x2");
    OracleEstimate est;
    est.kind = OracleKind::quadrature;
    if (x1 == x2) return est;  // empty interval
    const CfSetup setup = cf_setup(triplet, t);

    double s_max;
    double truncation = 0.0;
    if (setup.gauss_rate > 0.0) {
        const double target = 30.0;  // exp(-30) ~ 1e-13
        s_max = std::sqrt(target / setup.gauss_rate);
        truncation = std::exp(-target) / target;
    } else {
        est.slow_decay = true;
        s_max = 1000.0;
        truncation = 2.0 / (pi * s_max);
    }

    // Segments one oscillation period wide, summed with compensation.
    const double omega = std::max({std::abs(x1), std::abs(x2), 1.0});
    const double width = pi / omega;
    QuadratureOptions opt;
    opt.rel_tol = 1e-11;
    double total = 0.0, comp = 0.0, quad_err = 0.0;
    const auto g = [&](double s) { return inversion_integrand(triplet, t, setup, x1, x2, s); };
    for (double lo = 0.0; lo < s_max; lo += width) {
        const double hi = std::min(lo + width, s_max);
        const auto seg = integrate_finite(g, lo, hi, opt);
        const double y = seg.value - comp;
        const double tmp = total + y;
        comp = (tmp - total) - y;
        total = tmp;
        quad_err += seg.error_estimate;
    }
    est.value = total / pi;
    est.error_bound = quad_err / pi + truncation;
    if (est.value < 0.0 || est.value > 1.0) {
        est.clamped = est.value < -1e-9 || est.value > 1.0 + 1e-9;
        est.value = std::clamp(est.value, 0.0, 1.0);
    }
    return est;
}

// Chernoff bound on P(X_t < anchor * V_t): min over a theta grid of
// exp(t [sigma2 theta^2/2 + int (e^{-theta u} - 1 + theta u) mu] + theta anchor V_t).
double lower_tail_bound(const LevyTriplet& triplet, double t, double anchor_std, double v_t) {
    double best = 1e-3;  // fallback when no exponential moment is available
    for (double theta : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        try {
            double g = 0.5 * triplet.sigma2() * theta * theta;
            g += measure_integral(triplet.measure(), [theta](double u) {
                return detail::expm1_minus_x(-theta * u);
            });
            const double log_bound = t * g - theta * triplet.rho() * t + theta * anchor_std * v_t;
            best = std::min(best, std::exp(std::min(log_bound, 0.0)));
        } catch (const error&) {
            // no exponential moment for this theta
        }
    }
    return best;
}

} // namespace

OracleEstimate cf_inversion_cdf_diff(const LevyTriplet& triplet, double t, double x1, double x2) {
    return cf_inversion_impl(triplet, t, x1, x2);
}

OracleEstimate cf_inversion_cdf(const LevyTriplet& triplet, double t, double x) {
    constexpr double anchor = -44.0;
    if (x <= anchor) {
        OracleEstimate est;
        est.kind = OracleKind::quadrature;
        est.error_bound = 1.0;
        est.slow_decay = true;
        return est;
    }
    OracleEstimate est = cf_inversion_impl(triplet, t, anchor, x);
    const double v_t = std::sqrt(cumulant(triplet, 2, t));
    est.error_bound += lower_tail_bound(triplet, t, anchor, v_t);
    return est;
}

// ---------------------------------------------------------------------------
// Monte Carlo

namespace {

struct JumpComponent {
    double weight = 0.0;
    bool is_atom = false;
    double atom_value = 0.0;
    const DensityPiece* piece = nullptr;
    // bounded pieces: rejection against a density bound
    double bound = 0.0;
    // unbounded pieces: numeric inverse CDF over mass quantiles
    std::vector<double> inv_u;    // support points
    std::vector<double> inv_cdf;  // cumulative mass at those points
};

double piece_mass(const DensityPiece& piece) {
    return piece_integral_over(piece, -inf, inf, [](double) { return 1.0; }).value;
}

JumpComponent make_piece_component(const DensityPiece& piece) {
    JumpComponent comp;
    comp.piece = &piece;
    comp.weight = piece_mass(piece);
    if (piece.bounded()) {
        double top = 0.0;
        constexpr int scan = 4096;
        for (int i = 0; i <= scan; ++i) {
            const double u = piece.lo + (piece.hi - piece.lo) * i / scan;
            if (u == 0.0) continue;
            top = std::max(top, piece.density(u));
        }
        if (top <= 0.0 && comp.weight > 1e-12)
            throw moment_error("no usable rejection bound for a density piece");
        comp.bound = 1.1 * top;
        return comp;
    }
    // Tabulate the CDF on an exponentially spaced grid along the tail.
    const bool right = piece.positive_side();
    const double start = right ? piece.lo : -piece.hi;  // mirrored coordinate
    const double scale = std::max(1.0, std::abs(start));
    const auto dens = [&](double v) { return piece.density(right ? v : -v); };
    std::vector<double> nodes{std::max(start, 1e-300)};
    std::vector<double> cdf{0.0};
    QuadratureOptions opt;
    opt.rel_tol = 1e-10;
    double acc = 0.0;
    for (int j = 0; j < 2048; ++j) {
        const double next = start + scale * std::expm1(0.02 * (j + 1));
        const auto seg = integrate_finite(dens, nodes.back(), next, opt);
        acc += seg.value;
        nodes.push_back(next);
        cdf.push_back(acc);
        if (acc > 0.0 && seg.value < 1e-14 * acc && j > 16) break;
    }
    comp.inv_u = std::move(nodes);
    comp.inv_cdf = std::move(cdf);
    comp.weight = comp.inv_cdf.back();
    return comp;
}

double sample_component(const JumpComponent& comp, Xoshiro256pp& rng) {
    if (comp.is_atom) return comp.atom_value;
    const DensityPiece& piece = *comp.piece;
    if (piece.bounded()) {
        for (;;) {
            const double u = piece.lo + (piece.hi - piece.lo) * rng.uniform();
            const double v = comp.bound * rng.uniform();
            if (v <= piece.density(u)) return u;
        }
    }
    const double target = rng.uniform() * comp.inv_cdf.back();
    const auto it = std::upper_bound(comp.inv_cdf.begin(), comp.inv_cdf.end(), target);
    std::size_t j = std::min(comp.inv_cdf.size() - 1,
                             static_cast<std::size_t>(it - comp.inv_cdf.begin()));
    if (j == 0) j = 1;
    const double c0 = comp.inv_cdf[j - 1], c1 = comp.inv_cdf[j];
    const double w = c1 > c0 ? (target - c0) / (c1 - c0) : 0.5;
    const double v = comp.inv_u[j - 1] + w * (comp.inv_u[j] - comp.inv_u[j - 1]);
    return piece.positive_side() ? v : -v;
}

double sample_normal(Xoshiro256pp& rng) {
    for (;;) {
        const double u = 2.0 * rng.uniform() - 1.0;
        const double v = 2.0 * rng.uniform() - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
}

std::int64_t sample_poisson(double intensity, Xoshiro256pp& rng) {
    std::int64_t count = -1;
    double acc = 0.0;
    while (acc < intensity) {
        acc += -std::log1p(-rng.uniform());
        ++count;
    }
    return count;
}

} // namespace

OracleEstimate simulate_cdf(const LevyTriplet& triplet, double t, double x,
                            std::int64_t n_paths, std::uint64_t seed) {
    if (n_paths < 1)
        throw std::invalid_argument("simulate_cdf: need n_paths >= 1");
    if (!(t > 0.0))
        throw std::invalid_argument("simulate_cdf: need t > 0");

    std::vector<JumpComponent> components;
    double total_rate = 0.0;
    for (const auto& atom : triplet.measure().atoms) {
        JumpComponent comp;
        comp.is_atom = true;
        comp.atom_value = atom.x;
        comp.weight = atom.mass;
        components.push_back(comp);
        total_rate += atom.mass;
    }
    for (const auto& piece : triplet.measure().density_pieces) {
        try {
            auto comp = make_piece_component(piece);
            if (comp.weight > 0.0) {
                total_rate += comp.weight;
                components.push_back(std::move(comp));
            }
        } catch (const error& e) {
            throw moment_error(std::string("simulate_cdf: infinite-activity measure rejected: ") +
                               e.what());
        }
    }
    std::vector<double> cum_weight;
    double acc = 0.0;
    for (const auto& comp : components) {
        acc += comp.weight;
        cum_weight.push_back(acc);
    }

    double mean_jump_rate = 0.0;  // int u mu(du), the compensator slope
    try {
        mean_jump_rate = measure_integral(triplet.measure(), [](double u) { return u; });
    } catch (const error&) {
        throw moment_error("simulate_cdf: compensator integral diverges");
    }

    const double sigma_t = std::sqrt(triplet.sigma2() * t);
    const double drift_t = (triplet.rho() - mean_jump_rate) * t;
    const double threshold = x * std::sqrt(cumulant(triplet, 2, t));
    const double intensity = total_rate * t;

    constexpr std::int64_t block_size = 65536;
    const std::int64_t n_blocks = (n_paths + block_size - 1) / block_size;
    std::vector<std::int64_t> hits(static_cast<std::size_t>(n_blocks), 0);

    const auto run_block = [&](std::int64_t b) {
        std::uint64_t sm = seed + static_cast<std::uint64_t>(b + 1) * 0x9E3779B97F4A7C15ULL;
        Xoshiro256pp rng(splitmix64_next(sm));
        const std::int64_t lo = b * block_size;
        const std::int64_t hi = std::min(n_paths, lo + block_size);
        std::int64_t count = 0;
        for (std::int64_t p = lo; p < hi; ++p) {
            double path = drift_t;
            if (sigma_t > 0.0) path += sigma_t * sample_normal(rng);
            const std::int64_t jumps = intensity > 0.0 ? sample_poisson(intensity, rng) : 0;
            for (std::int64_t j = 0; j < jumps; ++j) {
                const double pick = rng.uniform() * total_rate;
                const auto it = std::upper_bound(cum_weight.begin(), cum_weight.end(), pick);
                const std::size_t idx =
                    std::min(components.size() - 1, static_cast<std::size_t>(it - cum_weight.begin()));
                path += sample_component(components[idx], rng);
            }
            if (path < threshold) ++count;
        }
        hits[static_cast<std::size_t>(b)] = count;
    };

    const unsigned n_threads = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                               static_cast<unsigned>(n_blocks)));
    if (n_threads <= 1 || n_blocks == 1) {
        for (std::int64_t b = 0; b < n_blocks; ++b) run_block(b);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < n_threads; ++w)
            pool.emplace_back([&, w] {
                for (std::int64_t b = w; b < n_blocks; b += n_threads) run_block(b);
            });
        for (auto& th : pool) th.join();
    }

    std::int64_t total_hits = 0;
    for (std::int64_t h : hits) total_hits += h;
    OracleEstimate est;
    est.kind = OracleKind::monte_carlo;
    est.n_paths = n_paths;
    est.value = static_cast<double>(total_hits) / static_cast<double>(n_paths);
    est.std_error = std::sqrt(est.value * (1.0 - est.value) / static_cast<double>(n_paths));
    est.error_bound = 3.0 * est.std_error;
    return est;
}

// ---------------------------------------------------------------------------
// regularized lower incomplete gamma (series + continued fraction)

namespace {

double gamma_p_series(double a, double x) {
    const double eps = std::numeric_limits<double>::epsilon();
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int i = 0; i < 10000; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * eps)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw quadrature_error("gamma_cdf: series did not converge");
}

double gamma_q_cf(double a, double x) {
    const double eps = std::numeric_limits<double>::epsilon();
    const double fpmin = std::numeric_limits<double>::min() / eps;
    double b = x + 1.0 - a;
    double c = 1.0 / fpmin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) <= eps)
            return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    }
    throw quadrature_error("gamma_cdf: continued fraction did not converge");
}

} // namespace

double gamma_cdf(double shape, double x) {
    if (!(shape > 0.0) || !std::isfinite(shape))
        throw std::invalid_argument("gamma_cdf: shape must be positive");
    if (std::isnan(x))
        throw std::invalid_argument("gamma_cdf: NaN argument");
    if (x <= 0.0) return 0.0;
    if (x == inf) return 1.0;
    if (x < shape + 1.0) return gamma_p_series(shape, x);
    return 1.0 - gamma_q_cf(shape, x);
}

} // namespace levyedge
