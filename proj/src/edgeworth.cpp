#include "levyedge/edgeworth.hpp"

#include "levyedge/errors.hpp"
#include "levyedge/partitions.hpp"
#include "levyedge/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace levyedge {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double log_sqrt_2pi = 0.9189385332046727417803297;  // log sqrt(2 pi)

struct SolutionFactor {
    double log_mag = 0.0;  // log of |prod_m (1/k_m!) (lambda_{m+2}/(m+2)!)^{k_m}|
    int sign = 1;
    int l = 0;
    int hermite_order = 0;  // nu + 2l - 1
};

std::vector<SolutionFactor> build_factors(const CumulantSet& cs, int nu) {
    if (nu < 1 || nu > partition_max_nu)
        throw std::invalid_argument("series order nu must be in [1, " +
                                    std::to_string(partition_max_nu) + "]");
    if (nu + 2 > cs.max_order())
        throw std::invalid_argument("missing cumulant order " + std::to_string(nu + 2) +
                                    " (set holds 2.." + std::to_string(cs.max_order()) + ")");
    const auto solutions = partition_solutions(nu);
    std::vector<SolutionFactor> out;
    out.reserve(solutions->size());
    for (const auto& sol : *solutions) {
        SolutionFactor f;
        f.l = sol.l;
        f.hermite_order = nu + 2 * sol.l - 1;
        bool vanishes = false;
        for (int m = 1; m <= nu; ++m) {
            const int k = sol.multiplicities[static_cast<std::size_t>(m) - 1];
            if (k == 0) continue;
            const int order = m + 2;
            const int s = cs.lambda_sign(order);
            if (s == 0) {
                vanishes = true;
                break;
            }
            if (s < 0 && (k & 1)) f.sign = -f.sign;
            f.log_mag += k * (cs.log_abs_lambda_base(order) - std::lgamma(m + 3.0)) -
                         std::lgamma(k + 1.0);
        }
        if (!vanishes) out.push_back(f);
    }
    return out;
}

// Sum of H_{order(+1)} against the factors, folded with the normal density in
// log space so neither huge Hermite values nor tiny products overflow. The
// factors carry the time-1 scaled cumulants; the whole sum is rescaled by
// t^{-nu/2} in one multiply, which keeps the scaling in t exact even where
// the partition sum cancels heavily.
double eval_factors(const std::vector<SolutionFactor>& factors, const CumulantSet& cs, int nu,
                    double x, bool derivative) {
    if (factors.empty()) return 0.0;
    int top = 0;
    for (const auto& f : factors) top = std::max(top, f.hermite_order);
    const auto row = hermite_row(top + (derivative ? 1 : 0), x);
    const double log_damp = -0.5 * x * x - log_sqrt_2pi;
    double acc = 0.0;
    for (const auto& f : factors) {
        const double h = row[static_cast<std::size_t>(f.hermite_order + (derivative ? 1 : 0))];
        if (h == 0.0) continue;
        const double mag = std::exp(f.log_mag + std::log(std::abs(h)) + log_damp);
        acc += (h < 0.0) == (f.sign < 0) ? mag : -mag;
    }
    const double time_scale = std::exp(-0.5 * nu * cs.log_t());
    // acc holds the density-damped partition sum; the CDF term negates it.
    return (derivative ? acc : -acc) * time_scale;
}

// Convergence bookkeeping. Exact zero terms (parity cancellations) carry no
// scale information, so the non-increasing run tracks nonzero magnitudes; a
// set with no higher cumulants at all converges on its first (zero) term.
class SeriesAccumulator {
public:
    SeriesAccumulator(double tol, bool structural_zero)
        : tol_(tol), structural_zero_(structural_zero) {}

    // Returns true when the series should stop.
    bool add(double term) {
        last_mag_ = std::abs(term);
        if (structural_zero_) {
            verdict_ = SeriesVerdict::converged;
            return true;
        }
        if (last_mag_ > 0.0 || std::isnan(term)) {
            const bool grew = std::isnan(last_mag_) ||
                              (!mags_.empty() && !(last_mag_ <= mags_.back()) && last_mag_ > tol_);
            grow_streak_ = grew ? grow_streak_ + 1 : 0;
            mags_.push_back(last_mag_);
        }
        if (grow_streak_ >= 5) {
            verdict_ = SeriesVerdict::diverging;
            return true;
        }
        if (last_mag_ <= tol_ && !mags_.empty() && mags_.back() <= tol_ && trailing_non_increasing()) {
            verdict_ = SeriesVerdict::converged;
            return true;
        }
        return false;
    }

    SeriesVerdict verdict() const { return verdict_; }

    double tail_estimate() const {
        if (structural_zero_) return 0.0;
        if (verdict_ == SeriesVerdict::diverging) return inf;
        if (mags_.size() < 3) return last_mag_;
        const std::size_t n = mags_.size();
        if (mags_[n - 2] == 0.0 || mags_[n - 3] == 0.0) return last_mag_;
        const double r = std::sqrt((mags_[n - 1] / mags_[n - 2]) * (mags_[n - 2] / mags_[n - 3]));
        if (!(r < 1.0)) return inf;
        return mags_[n - 1] * r / (1.0 - r);
    }

private:
    bool trailing_non_increasing() const {
        const std::size_t n = mags_.size();
        for (std::size_t k = n - std::min<std::size_t>(2, n - 1); k < n; ++k)
            if (mags_[k] > mags_[k - 1]) return false;
        return true;
    }

    double tol_;
    bool structural_zero_;
    std::vector<double> mags_;
    int grow_streak_ = 0;
    double last_mag_ = 0.0;
    SeriesVerdict verdict_ = SeriesVerdict::truncated;
};

void require_gate(const SeriesGate& gate) {
    if (!gate.certified && !gate.override_conditions)
        throw condition_gate_error(
            "exact series refused: tail conditions are not certified for this model "
            "(rerun with override to force)");
}

double sum_terms(double base, const std::vector<double>& terms) {
    double acc = base;
    for (double t : terms) acc += t;
    return acc;
}

int clamp_max_order(int max_order) {
    if (max_order < 1)
        throw std::invalid_argument("series: max_order must be >= 1");
    return std::min(max_order, partition_max_nu);
}

} // namespace

std::string to_string(SeriesVerdict v) {
    switch (v) {
        case SeriesVerdict::converged: return "converged";
        case SeriesVerdict::diverging: return "diverging";
        default: return "truncated";
    }
}

SeriesGate series_gate(const ConditionReport& report, bool override_conditions) {
    return {exact_series_certified(report), override_conditions};
}

double q_function(const CumulantSet& cumulants, int nu, double x) {
    return eval_factors(build_factors(cumulants, nu), cumulants, nu, x, false);
}

double q_derivative(const CumulantSet& cumulants, int nu, double x) {
    return eval_factors(build_factors(cumulants, nu), cumulants, nu, x, true);
}

std::vector<QCoefficient> q_coefficients(const CumulantSet& cumulants, int nu) {
    const auto factors = build_factors(cumulants, nu);
    const double time_scale = std::exp(-0.5 * nu * cumulants.log_t());
    std::vector<QCoefficient> out;
    for (int l = 1; l <= nu; ++l) {
        QCoefficient c;
        c.l = l;
        c.hermite_order = nu + 2 * l - 1;
        bool present = false;
        for (const auto& f : factors) {
            if (f.l != l) continue;
            present = true;
            c.value += f.sign * std::exp(f.log_mag);
        }
        c.value *= time_scale;
        if (present) out.push_back(c);
    }
    return out;
}

SeriesResult cdf_truncated(const CumulantSet& cumulants, double x, int order) {
    if (order < 0)
        throw std::invalid_argument("cdf_truncated: order must be >= 0");
    if (order > 0 && order + 2 > cumulants.max_order())
        throw std::invalid_argument("cdf_truncated: cumulants cover orders up to " +
                                    std::to_string(cumulants.max_order()) + ", need " +
                                    std::to_string(order + 2));
    SeriesResult res;
    res.base = std_normal_cdf(x);
    for (int nu = 1; nu <= order; ++nu) {
        res.term_orders.push_back(nu);
        res.terms.push_back(q_function(cumulants, nu, x));
    }
    res.n_terms_used = order;
    res.verdict = SeriesVerdict::truncated;
    res.value = sum_terms(res.base, res.terms);
    if (!res.terms.empty()) res.tail_estimate = std::abs(res.terms.back());
    return res;
}

namespace {

// Shared driver: terms indexed by nu over `orders`, stopping by the policy.
template <typename TermFn>
SeriesResult run_series(const CumulantSet& cumulants, double base, const std::vector<int>& orders,
                        const SeriesOptions& opts, TermFn&& term_fn) {
    SeriesResult res;
    res.base = base;
    res.tol = opts.tol;
    SeriesAccumulator acc(opts.tol, cumulants.gaussian_like());
    for (int nu : orders) {
        const double term = term_fn(nu);
        res.term_orders.push_back(nu);
        res.terms.push_back(term);
        if (acc.add(term)) {
            res.verdict = acc.verdict();
            break;
        }
    }
    res.n_terms_used = static_cast<int>(res.terms.size());
    res.tail_estimate = acc.tail_estimate();
    res.value = sum_terms(res.base, res.terms);
    return res;
}

std::vector<int> order_range(int from, int to, int step) {
    std::vector<int> orders;
    for (int nu = from; nu <= to; nu += step) orders.push_back(nu);
    return orders;
}

} // namespace

SeriesResult cdf_difference_exact(const CumulantSet& cumulants, double x1, double x2,
                                  const SeriesOptions& opts, const SeriesGate& gate) {
    if (!(x1 < x2))
        throw std::invalid_argument("cdf_difference_exact: need x1 < x2");
    require_gate(gate);
    const int top = std::min(clamp_max_order(opts.max_order), cumulants.max_order() - 2);
    const double base = std_normal_cdf(x2) - std_normal_cdf(x1);
    return run_series(cumulants, base, order_range(1, top, 1), opts, [&](int nu) {
        const auto factors = build_factors(cumulants, nu);
        return eval_factors(factors, cumulants, nu, x2, false) -
               eval_factors(factors, cumulants, nu, x1, false);
    });
}

SeriesResult abs_cdf(const CumulantSet& cumulants, double x, const SeriesOptions& opts,
                     const SeriesGate& gate) {
    if (!(x > 0.0))
        throw std::invalid_argument("abs_cdf: need x > 0");
    require_gate(gate);
    const int top = std::min(clamp_max_order(opts.max_order), cumulants.max_order() - 2);
    const double base = 2.0 * std_normal_cdf(x) - 1.0;
    return run_series(cumulants, base, order_range(2, top, 2), opts,
                      [&](int nu) { return 2.0 * q_function(cumulants, nu, x); });
}

SeriesResult abs_tail(const CumulantSet& cumulants, double x, const SeriesOptions& opts,
                      const SeriesGate& gate) {
    if (!(x > 0.0))
        throw std::invalid_argument("abs_tail: need x > 0");
    require_gate(gate);
    const int top = std::min(clamp_max_order(opts.max_order), cumulants.max_order() - 2);
    const double base = 2.0 - 2.0 * std_normal_cdf(x);
    return run_series(cumulants, base, order_range(2, top, 2), opts,
                      [&](int nu) { return -2.0 * q_function(cumulants, nu, x); });
}

SeriesResult pdf_series(const CumulantSet& cumulants, double x, const SeriesOptions& opts,
                        const SeriesGate& gate, bool density_exists) {
    require_gate(gate);
    if (!density_exists && !gate.override_conditions)
        throw condition_gate_error(
            "density series refused: the law has no certified density component");
    const int top = std::min(clamp_max_order(opts.max_order), cumulants.max_order() - 2);
    return run_series(cumulants, std_normal_pdf(x), order_range(1, top, 1), opts,
                      [&](int nu) { return q_derivative(cumulants, nu, x); });
}

SeriesResult one_sided_cdf(const LevyTriplet& triplet, const ConditionReport& report, double t,
                           double x2, const SeriesOptions& opts) {
    const double x1 = lower_support_point(triplet, t);
    if (x2 <= x1) {
        // Below the support: the event is impossible.
        SeriesResult res;
        res.verdict = SeriesVerdict::converged;
        res.tol = opts.tol;
        return res;
    }
    const int top = clamp_max_order(opts.max_order);
    const auto cumulants = cumulant_set(triplet, top, t);
    constexpr double margin = 1e-9;
    return cdf_difference_exact(cumulants, x1 - margin, x2, opts,
                                series_gate(report, opts.override_conditions));
}

double iid_sum_cdf(const CumulantSet& summand_cumulants, std::int64_t n, double x, int k) {
    if (k < 3)
        throw std::invalid_argument("iid_sum_cdf: need k >= 3");
    if (n < 1)
        throw std::invalid_argument("iid_sum_cdf: need n >= 1");
    if (k > summand_cumulants.max_order())
        throw std::invalid_argument("iid_sum_cdf: cumulants cover orders up to " +
                                    std::to_string(summand_cumulants.max_order()) + ", need " +
                                    std::to_string(k));
    double acc = std_normal_cdf(x);
    for (int nu = 1; nu <= k - 2; ++nu)
        acc += q_function(summand_cumulants, nu, x) *
               std::pow(static_cast<double>(n), -0.5 * nu);
    return acc;
}

} // namespace levyedge
