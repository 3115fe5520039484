#ifndef LEVYEDGE_ORACLES_HPP
#define LEVYEDGE_ORACLES_HPP

#include "levyedge/levy_model.hpp"

#include <cstdint>

namespace levyedge {

enum class OracleKind { quadrature, monte_carlo, closed_form };

struct OracleEstimate {
    double value = 0.0;
    double error_bound = 0.0;
    OracleKind kind = OracleKind::quadrature;
    std::int64_t n_paths = 0;   // monte_carlo only
    double std_error = 0.0;     // monte_carlo only
    bool clamped = false;       // value pushed back into [0, 1]
    bool slow_decay = false;    // integrand decays too slowly; bound inflated
};

// P(x1 < X_t/V < x2) by inversion of the characteristic function
// exp(t psi(s/V_t)), truncated where the Gaussian factor is below 1e-13 and
// integrated on segments split at the oscillation period. Models without a
// Gaussian part get a capped range and an inflated, flagged bound.
// The triplet is taken as centered (rho folds into the mean; standardize first).
OracleEstimate cf_inversion_cdf_diff(const LevyTriplet& triplet, double t, double x1, double x2);

// P(X_t/V < x) via the same inversion from a far-left anchor, with a
// Chernoff bound on the mass below the anchor added to the error bound.
OracleEstimate cf_inversion_cdf(const LevyTriplet& triplet, double t, double x);

// P(X_t/V < x) by exact simulation of the compensated finite-activity path:
// Gaussian part + Poisson-many jumps - t * int u mu(du). Deterministic for a
// given (seed, n_paths) regardless of threading: paths are generated in fixed
// blocks of 65536, block b seeded by a splitmix64 chain starting at
// seed + (b+1) * 0x9E3779B97F4A7C15.
OracleEstimate simulate_cdf(const LevyTriplet& triplet, double t, double x,
                            std::int64_t n_paths, std::uint64_t seed);

// Regularized lower incomplete gamma P(shape, x), abs error <= 1e-12.
double gamma_cdf(double shape, double x);

} // namespace levyedge

#endif
