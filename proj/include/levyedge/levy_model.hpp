#ifndef LEVYEDGE_LEVY_MODEL_HPP
#define LEVYEDGE_LEVY_MODEL_HPP

#include "levyedge/quadrature.hpp"

#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace levyedge {

// Highest cumulant order we compute; series of order <= 60 need nu + 2.
inline constexpr int cumulant_max_order = 62;

struct Atom {
    double x = 0.0;     // jump size, nonzero
    double mass = 0.0;  // intensity, positive
};

enum class PieceKind { polyexp, tabulated };

// One density piece of the jump measure, supported on an interval that does
// not straddle 0 (an endpoint at 0 is read as open).
//
//   polyexp:   f(x) = |x|^power * poly(x) * exp(exp_poly(x))
//   tabulated: piecewise-linear through (xs, values); support is the grid range
struct DensityPiece {
    PieceKind kind = PieceKind::polyexp;
    double lo = 0.0;  // may be -infinity
    double hi = 0.0;  // may be +infinity

    std::vector<double> poly{1.0};  // ascending powers
    std::vector<double> exp_poly;   // ascending powers, empty means exp(0)
    double power = 0.0;

    std::vector<double> xs;
    std::vector<double> values;
    bool monotone_tail = false;

    double density(double x) const;
    double log_density(double x) const;  // -inf outside the support
    bool bounded() const;
    bool positive_side() const { return lo >= 0.0; }
};

struct LevyMeasure {
    std::vector<Atom> atoms;
    std::vector<DensityPiece> density_pieces;
};

// Integral of g(u) * f(u) over the part of the piece inside [lo, hi]
// (either bound may be infinite). Handles endpoints at 0 and infinite tails.
QuadratureResult piece_integral_over(const DensityPiece& piece, double lo, double hi,
                                     const std::function<double(double)>& g);

// Sum over atoms and pieces of g d(mu), over all of R \ {0}.
double measure_integral(const LevyMeasure& measure, const std::function<double(double)>& g);

// Characteristic triplet in the fully compensated representation:
//   psi(s) = -sigma2 s^2/2 + i rho s + int (e^{isu} - 1 - isu) mu(du),
// so rho is the mean of the time-1 law. Construction validates the measure
// (no mass at 0, finite int min(u^2,1) d mu) and records warnings.
class LevyTriplet {
public:
    LevyTriplet(double sigma2, double rho, LevyMeasure measure, bool cramer_declared);

    double sigma2() const { return sigma2_; }
    double rho() const { return rho_; }
    const LevyMeasure& measure() const { return measure_; }
    bool cramer_declared() const { return cramer_declared_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

private:
    double sigma2_;
    double rho_;
    LevyMeasure measure_;
    bool cramer_declared_;
    std::vector<std::string> warnings_;
};

// Cumulants gamma_2..gamma_max of the time-t law, the scale V = sqrt(gamma_2),
// and the scaled cumulants lambda_k = gamma_k / V^k (lambda_2 == 1 exactly).
// Internally keeps the time-1 base so that gamma_k(t) = t * gamma_k(1) holds
// bitwise and log|lambda_k(t)| = log|lambda_k(1)| + (1 - k/2) log t exactly.
class CumulantSet {
public:
    // base_gammas[i] is gamma_{i+2} of the time-1 law.
    static CumulantSet from_base(std::vector<double> base_gammas, double t);
    // gammas[i] is gamma_{i+2} of the law itself (time folded in).
    static CumulantSet from_gammas(std::vector<double> gammas, double t = 1.0);

    double t() const { return t_; }
    int max_order() const { return static_cast<int>(gammas_.size()) + 1; }
    double gamma(int order) const;
    double lambda(int order) const;
    double V() const { return V_; }

    int lambda_sign(int order) const;      // -1, 0, +1
    double log_abs_lambda(int order) const;  // -inf when lambda vanishes
    // time-1 part of the decomposition: log|lambda_k| = base + (1 - k/2) log t
    double log_abs_lambda_base(int order) const;
    double log_t() const { return log_t_; }

    // True when every stored lambda_k, k >= 3, vanishes (pure Gaussian law).
    bool gaussian_like() const;

private:
    CumulantSet() = default;
    double t_ = 1.0;
    double log_t_ = 0.0;
    double V_ = 0.0;
    std::vector<double> gammas_;               // time-t values, index 0 <-> order 2
    std::vector<double> log_abs_lambda_base_;  // canonical time-1 decomposition
    std::vector<int> signs_;
    void require_order(int order) const;
};

enum class Verdict3 { holds, fails, unknown };

// How the exact series is certified, from the strongest hypothesis downward.
enum class SeriesBasis {
    bounded_support,      // jump measure supported on a bounded interval
    density_tail,         // tail density below C exp(-|x|^{1+eps})
    interval_mass_tail,   // unit-interval masses below C exp(-x^{1+eps})
    truncated_only,       // only the truncated expansion is certified
    none
};

std::string to_string(Verdict3 v);
std::string to_string(SeriesBasis b);

struct TailCheck {
    Verdict3 verdict = Verdict3::unknown;
    double C = 0.0;
    double epsilon = 0.0;
    double a = 0.0;
};

struct ConditionReport {
    Verdict3 bounded_support = Verdict3::unknown;
    double support_bound = 0.0;
    TailCheck density_tail_decay;
    TailCheck interval_mass_decay;
    Verdict3 exp_moment = Verdict3::unknown;  // exponential-moment condition
    double exp_moment_lambda = 0.0;
    bool cramer_sufficient = false;
    bool cramer_declared = false;
    SeriesBasis strongest = SeriesBasis::none;
};

// True when the report certifies the exact (infinite) series.
bool exact_series_certified(const ConditionReport& report);

// gamma_order of the time-t law: t * (sum of atom x^order mass + piece
// moments), plus t*sigma2 when order == 2. Divergent integrals raise
// moment_error; order < 2 is rejected (centering owns order 1).
double cumulant(const LevyTriplet& triplet, int order, double t);

// Cumulants of orders 2..nu_max+2 at time t, assembled for series of order
// up to nu_max.
CumulantSet cumulant_set(const LevyTriplet& triplet, int nu_max, double t);

// psi(s) of the fully compensated representation; the time-t characteristic
// function is exp(t psi(s)).
std::complex<double> characteristic_exponent(const LevyTriplet& triplet, double s);

ConditionReport check_conditions(const LevyTriplet& triplet);

// y = (x - shift) / scale
struct AffineMap {
    double shift = 0.0;
    double scale = 1.0;
    double operator()(double x) const { return (x - shift) / scale; }
};

// Map from raw thresholds at time t to standardized units, plus the centered
// triplet (rho = 0). Zero variance is rejected.
std::pair<AffineMap, LevyTriplet> standardize(const LevyTriplet& triplet, double t);

// Standardized lower endpoint of the support of X_t for a spectrally
// positive, finite-variation measure with sigma2 = 0: all mass above comes
// from jumps, so X_t >= -t * int x mu(dx) after compensation.
double lower_support_point(const LevyTriplet& triplet, double t);

} // namespace levyedge

#endif
