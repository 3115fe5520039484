#ifndef LEVYEDGE_DETAIL_STABLE_KERNELS_HPP
#define LEVYEDGE_DETAIL_STABLE_KERNELS_HPP

#include <cmath>

namespace levyedge::detail {

// cos(x) - 1 without cancellation.
inline double cos_minus_one(double x) {
    const double s = std::sin(0.5 * x);
    return -2.0 * s * s;
}

// sin(x) - x; the direct difference loses all digits for small x.
inline double sin_minus_x(double x) {
    if (std::abs(x) >= 0.1) return std::sin(x) - x;
    const double x2 = x * x;
    // -x^3/3! + x^5/5! - x^7/7! + x^9/9!
    return x * x2 * (-1.0 / 6.0 + x2 * (1.0 / 120.0 + x2 * (-1.0 / 5040.0 + x2 / 362880.0)));
}

// e^x - 1 - x without cancellation.
inline double expm1_minus_x(double x) {
    if (std::abs(x) >= 0.03) return std::expm1(x) - x;
    const double x2 = x * x;
    return x2 * (1.0 / 2.0 + x * (1.0 / 6.0 + x * (1.0 / 24.0 + x * (1.0 / 120.0 + x * (1.0 / 720.0 + x / 5040.0)))));
}

} // namespace levyedge::detail

#endif
