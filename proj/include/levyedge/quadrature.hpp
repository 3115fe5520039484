#ifndef LEVYEDGE_QUADRATURE_HPP
#define LEVYEDGE_QUADRATURE_HPP

#include <functional>

namespace levyedge {

struct QuadratureOptions {
    double rel_tol = 1e-12;  // per-segment acceptance
    double abs_floor = 1e-300;
    int max_depth = 50;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

// Adaptive Gauss-Legendre on [a, b]. Throws quadrature_error when the depth
// cap is hit before the tolerance.
QuadratureResult integrate_finite(const std::function<double(double)>& f, double a, double b,
                                  const QuadratureOptions& opt = {});

// Integral over [a, +inf) via the substitution u = a + scale * e^y, expanding
// the y-window until three consecutive window contributions are negligible.
// Non-decaying window contributions raise moment_error (divergent integral).
QuadratureResult integrate_right_tail(const std::function<double(double)>& f, double a,
                                      double scale = 1.0, const QuadratureOptions& opt = {});

// Integral over (-inf, b], mirrored onto integrate_right_tail.
QuadratureResult integrate_left_tail(const std::function<double(double)>& f, double b,
                                     double scale = 1.0, const QuadratureOptions& opt = {});

// Integral over (0, b] of an integrand that may be singular (but integrable)
// at 0, via u = e^y. Divergence at 0 raises moment_error.
QuadratureResult integrate_from_zero(const std::function<double(double)>& f, double b,
                                     const QuadratureOptions& opt = {});

} // namespace levyedge

#endif
