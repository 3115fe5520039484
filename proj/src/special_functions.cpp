#include "levyedge/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace levyedge {

namespace {

void check_order(int n) {
    if (n < 0)
        throw std::invalid_argument("hermite: order must be non-negative");
    if (n > hermite_max_order)
        throw std::invalid_argument("hermite: order " + std::to_string(n) +
                                    " exceeds cap " + std::to_string(hermite_max_order));
}

void check_point(double x) {
    if (!std::isfinite(x))
        throw std::invalid_argument("hermite: non-finite evaluation point");
}

} // namespace

double hermite(int n, double x) {
    check_order(n);
    check_point(x);
    if (n == 0) return 1.0;
    if (n == 1) return x;
    double hm = 1.0; // H_{k-1}
    double h = x;    // H_k
    for (int k = 1; k < n; ++k) {
        const double hn = x * h - static_cast<double>(k) * hm;
        hm = h;
        h = hn;
    }
    return h;
}

std::vector<double> hermite_row(int n_max, double x) {
    check_order(n_max);
    check_point(x);
    std::vector<double> row(static_cast<std::size_t>(n_max) + 1);
    row[0] = 1.0;
    if (n_max == 0) return row;
    row[1] = x;
    for (int k = 1; k < n_max; ++k)
        row[static_cast<std::size_t>(k) + 1] =
            x * row[static_cast<std::size_t>(k)] - static_cast<double>(k) * row[static_cast<std::size_t>(k) - 1];
    return row;
}

double std_normal_cdf(double x) {
    if (std::isnan(x))
        throw std::invalid_argument("std_normal_cdf: NaN argument");
    if (x == std::numeric_limits<double>::infinity()) return 1.0;
    if (x == -std::numeric_limits<double>::infinity()) return 0.0;
    // erfc keeps full relative accuracy in the far tails.
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double std_normal_pdf(double x) {
    if (!std::isfinite(x))
        throw std::invalid_argument("std_normal_pdf: non-finite argument");
    static const double inv_sqrt_2pi = 0.3989422804014326779399461;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

} // namespace levyedge
