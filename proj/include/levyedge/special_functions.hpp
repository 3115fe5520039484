#ifndef LEVYEDGE_SPECIAL_FUNCTIONS_HPP
#define LEVYEDGE_SPECIAL_FUNCTIONS_HPP

#include <vector>

namespace levyedge {

// Highest supported Hermite order. Series of order <= 60 never ask for more.
inline constexpr int hermite_max_order = 200;

// Probabilists' (non-normalised) Hermite polynomial H_n(x), computed with the
// upward recurrence H_{n+1} = x H_n - n H_{n-1}, H_0 = 1, H_1 = x.
double hermite(int n, double x);

// [H_0(x), ..., H_{n_max}(x)]. Element k is bitwise equal to hermite(k, x).
std::vector<double> hermite_row(int n_max, double x);

// Standard normal CDF, absolute error <= 1e-15. Accepts +-infinity.
double std_normal_cdf(double x);

// Standard normal density (2*pi)^{-1/2} exp(-x^2/2).
double std_normal_pdf(double x);

} // namespace levyedge

#endif
