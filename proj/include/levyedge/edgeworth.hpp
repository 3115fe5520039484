#ifndef LEVYEDGE_EDGEWORTH_HPP
#define LEVYEDGE_EDGEWORTH_HPP

#include "levyedge/levy_model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace levyedge {

struct SeriesOptions {
    double tol = 1e-10;
    int max_order = 40;
    bool override_conditions = false;
};

enum class SeriesVerdict { converged, truncated, diverging };
std::string to_string(SeriesVerdict v);

// One evaluated series: leading normal term plus correction terms in order.
// value re-sums as base + terms. A converged verdict means the last term fell
// below tol with a non-increasing run of the trailing magnitudes.
struct SeriesResult {
    double value = 0.0;
    double base = 0.0;
    std::vector<int> term_orders;
    std::vector<double> terms;
    int n_terms_used = 0;
    SeriesVerdict verdict = SeriesVerdict::truncated;
    double tol = 0.0;
    double tail_estimate = 0.0;
};

// Whether the exact (infinite) series may run; built from a ConditionReport.
struct SeriesGate {
    bool certified = false;
    bool override_conditions = false;
};
SeriesGate series_gate(const ConditionReport& report, bool override_conditions = false);

// Correction term of order nu: the partition-sum of Hermite polynomials of
// order nu+2l-1 against products of scaled cumulants, damped by the normal
// density (products are accumulated in sign/log-magnitude form).
double q_function(const CumulantSet& cumulants, int nu, double x);

// d/dx of the correction term: same products, Hermite order nu+2l, sign +.
double q_derivative(const CumulantSet& cumulants, int nu, double x);

// The per-l weights of the correction term, for inspection and tests:
// q_function(nu, x) == -pdf(x) * sum_l value_l * H_{hermite_order_l}(x).
struct QCoefficient {
    int l = 0;
    int hermite_order = 0;
    double value = 0.0;
};
std::vector<QCoefficient> q_coefficients(const CumulantSet& cumulants, int nu);

// Normal CDF plus the first `order` corrections at the cumulants' time.
SeriesResult cdf_truncated(const CumulantSet& cumulants, double x, int order);

// P(x1 < X_t/V < x2) as the full series, run to convergence under the gate.
SeriesResult cdf_difference_exact(const CumulantSet& cumulants, double x1, double x2,
                                  const SeriesOptions& opts, const SeriesGate& gate);

// P(|X_t| < x V): even-order terms only, doubled.
SeriesResult abs_cdf(const CumulantSet& cumulants, double x, const SeriesOptions& opts,
                     const SeriesGate& gate);

// P(|X_t| > x V); abs_cdf + abs_tail == 1 exactly.
SeriesResult abs_tail(const CumulantSet& cumulants, double x, const SeriesOptions& opts,
                      const SeriesGate& gate);

// Density of X_t/V: normal density plus derivative corrections.
SeriesResult pdf_series(const CumulantSet& cumulants, double x, const SeriesOptions& opts,
                        const SeriesGate& gate, bool density_exists);

// P(X_t < x2 V) for a spectrally positive pure-jump model: the lower support
// point replaces the missing left endpoint.
SeriesResult one_sided_cdf(const LevyTriplet& triplet, const ConditionReport& report, double t,
                           double x2, const SeriesOptions& opts);

// P(sum of n iid copies < sqrt(n) V x): corrections scaled by n^{-nu/2}.
double iid_sum_cdf(const CumulantSet& summand_cumulants, std::int64_t n, double x, int k);

} // namespace levyedge

#endif
