#include "levyedge/levy_model.hpp"

#include "levyedge/detail/stable_kernels.hpp"
#include "levyedge/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace levyedge {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

double horner(const std::vector<double>& coeffs, double x) {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

double ipow(double x, int n) {
    double acc = 1.0;
    for (int i = 0; i < n; ++i) acc *= x;
    return acc;
}

double logsumexp(const std::vector<double>& items) {
    double top = -inf;
    for (double v : items) top = std::max(top, v);
    if (top == -inf) return -inf;
    double acc = 0.0;
    for (double v : items) acc += std::exp(v - top);
    return top + std::log(acc);
}

} // namespace

bool DensityPiece::bounded() const { return std::isfinite(lo) && std::isfinite(hi); }

double DensityPiece::density(double x) const {
    if (x < lo || x > hi) return 0.0;
    if (kind == PieceKind::tabulated) {
        if (xs.size() < 2 || x < xs.front() || x > xs.back()) return 0.0;
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        const std::size_t j = std::min(xs.size() - 1, static_cast<std::size_t>(it - xs.begin()));
        const std::size_t i = j - 1;
        const double w = (x - xs[i]) / (xs[j] - xs[i]);
        return values[i] + w * (values[j] - values[i]);
    }
    double f = horner(poly, x);
    if (power != 0.0) f *= std::pow(std::abs(x), power);
    if (!exp_poly.empty()) f *= std::exp(horner(exp_poly, x));
    return f;
}

double DensityPiece::log_density(double x) const {
    if (x < lo || x > hi) return -inf;
    if (kind == PieceKind::tabulated) {
        const double f = density(x);
        return f > 0.0 ? std::log(f) : -inf;
    }
    const double p = horner(poly, x);
    if (p <= 0.0) return -inf;
    double acc = std::log(p);
    if (power != 0.0) acc += power * std::log(std::abs(x));
    if (!exp_poly.empty()) acc += horner(exp_poly, x);
    return acc;
}

namespace {

// Integral of h over [L, H] with 0 <= L < H <= inf; h may be singular at 0.
QuadratureResult integrate_positive_side(const std::function<double(double)>& h, double L,
                                         double H) {
    if (L == 0.0) {
        if (std::isinf(H)) {
            const auto head = integrate_from_zero(h, 1.0);
            const auto tail = integrate_right_tail(h, 1.0, 1.0);
            return {head.value + tail.value, head.error_estimate + tail.error_estimate};
        }
        return integrate_from_zero(h, H);
    }
    if (std::isinf(H)) return integrate_right_tail(h, L, std::max(1.0, L));
    return integrate_finite(h, L, H);
}

} // namespace

QuadratureResult piece_integral_over(const DensityPiece& piece, double lo, double hi,
                                     const std::function<double(double)>& g) {
    const double L = std::max(lo, piece.lo);
    const double H = std::min(hi, piece.hi);
    if (!(L < H)) return {0.0, 0.0};
    if (piece.positive_side()) {
        const auto h = [&](double u) { return g(u) * piece.density(u); };
        return integrate_positive_side(h, L, H);
    }
    const auto h = [&](double v) { return g(-v) * piece.density(-v); };
    return integrate_positive_side(h, -H, -L);
}

double measure_integral(const LevyMeasure& measure, const std::function<double(double)>& g) {
    double acc = 0.0;
    for (const auto& atom : measure.atoms) acc += atom.mass * g(atom.x);
    for (const auto& piece : measure.density_pieces)
        acc += piece_integral_over(piece, -inf, inf, g).value;
    return acc;
}

namespace {

void validate_piece(const DensityPiece& piece) {
    if (std::isnan(piece.lo) || std::isnan(piece.hi) || !(piece.lo < piece.hi))
        throw config_error("density piece: support must be a nonempty interval");
    if (piece.lo < 0.0 && piece.hi > 0.0)
        throw config_error("density piece: support must not straddle 0");
    if (!std::isfinite(piece.lo) && !std::isfinite(piece.hi))
        throw config_error("density piece: support must have a finite endpoint");
    if (piece.kind == PieceKind::tabulated) {
        if (piece.xs.size() < 2 || piece.xs.size() != piece.values.size())
            throw config_error("tabulated piece: need matching xs/values with >= 2 nodes");
        for (std::size_t i = 1; i < piece.xs.size(); ++i)
            if (!(piece.xs[i] > piece.xs[i - 1]))
                throw config_error("tabulated piece: xs must increase strictly");
        for (double v : piece.values)
            if (!(v >= 0.0) || !std::isfinite(v))
                throw config_error("tabulated piece: values must be finite and >= 0");
        if (piece.lo != piece.xs.front() || piece.hi != piece.xs.back())
            throw config_error("tabulated piece: support must match the grid range");
        return;
    }
    if (piece.poly.empty())
        throw config_error("polyexp piece: empty polynomial");
    for (double c : piece.poly)
        if (!std::isfinite(c)) throw config_error("polyexp piece: non-finite coefficient");
    for (double c : piece.exp_poly)
        if (!std::isfinite(c)) throw config_error("polyexp piece: non-finite coefficient");
    if (!std::isfinite(piece.power))
        throw config_error("polyexp piece: non-finite power");
    // Spot-check positivity on an interior grid.
    const double ref = std::isfinite(piece.lo) ? piece.lo : piece.hi;
    const double lo = std::isfinite(piece.lo) ? piece.lo : -std::max(1e3, 16.0 * std::abs(ref));
    const double hi = std::isfinite(piece.hi) ? piece.hi : std::max(1e3, 16.0 * std::abs(ref));
    for (int i = 1; i < 64; ++i) {
        const double x = lo + (hi - lo) * i / 64.0;
        if (x == 0.0) continue;
        const double f = piece.density(x);
        if (std::isnan(f) || f < 0.0)
            throw config_error("polyexp piece: density negative or undefined inside support");
    }
}

} // namespace

LevyTriplet::LevyTriplet(double sigma2, double rho, LevyMeasure measure, bool cramer_declared)
    : sigma2_(sigma2), rho_(rho), measure_(std::move(measure)), cramer_declared_(cramer_declared) {
    if (!(sigma2_ >= 0.0) || !std::isfinite(sigma2_))
        throw config_error("sigma2 must be finite and >= 0");
    if (!std::isfinite(rho_))
        throw config_error("rho must be finite");
    for (const auto& atom : measure_.atoms) {
        if (atom.x == 0.0 || !std::isfinite(atom.x))
            throw config_error("atom location must be finite and nonzero");
        if (!(atom.mass > 0.0) || !std::isfinite(atom.mass))
            throw config_error("atom mass must be finite and positive");
    }
    for (const auto& piece : measure_.density_pieces) validate_piece(piece);
    // int min(u^2, 1) d mu must be finite.
    for (const auto& piece : measure_.density_pieces) {
        try {
            piece_integral_over(piece, -1.0, 1.0, [](double u) { return u * u; });
            piece_integral_over(piece, -inf, -1.0, [](double) { return 1.0; });
            piece_integral_over(piece, 1.0, inf, [](double) { return 1.0; });
        } catch (const error& e) {
            throw config_error(std::string("measure fails min(u^2,1) integrability: ") + e.what());
        }
    }
    if (sigma2_ == 0.0 && measure_.density_pieces.empty() && cramer_declared_)
        warnings_.push_back(
            "cramer_declared is set on a purely atomic model without Gaussian part; "
            "lattice laws do not satisfy the declared condition");
}

CumulantSet CumulantSet::from_base(std::vector<double> base_gammas, double t) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw std::invalid_argument("cumulant set: t must be positive and finite");
    if (base_gammas.empty())
        throw std::invalid_argument("cumulant set: need at least gamma_2");
    if (!(base_gammas[0] > 0.0))
        throw std::invalid_argument("cumulant set: gamma_2 <= 0 (degenerate law)");
    CumulantSet cs;
    cs.t_ = t;
    cs.log_t_ = std::log(t);
    const double log_g2 = std::log(base_gammas[0]);
    cs.gammas_.resize(base_gammas.size());
    cs.log_abs_lambda_base_.resize(base_gammas.size());
    cs.signs_.resize(base_gammas.size());
    for (std::size_t i = 0; i < base_gammas.size(); ++i) {
        const int order = static_cast<int>(i) + 2;
        const double base = base_gammas[i];
        if (!std::isfinite(base))
            throw std::invalid_argument("cumulant set: non-finite cumulant");
        cs.gammas_[i] = t * base;
        cs.signs_[i] = (base > 0.0) - (base < 0.0);
        cs.log_abs_lambda_base_[i] =
            cs.signs_[i] == 0 ? -inf : std::log(std::abs(base)) - 0.5 * order * log_g2;
    }
    cs.V_ = std::sqrt(cs.gammas_[0]);
    return cs;
}

CumulantSet CumulantSet::from_gammas(std::vector<double> gammas, double t) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw std::invalid_argument("cumulant set: t must be positive and finite");
    for (double& g : gammas) g /= t;
    return from_base(std::move(gammas), t);
}

void CumulantSet::require_order(int order) const {
    if (order < 2 || order > max_order())
        throw std::invalid_argument("cumulant set: order " + std::to_string(order) +
                                    " not stored (have 2.." + std::to_string(max_order()) + ")");
}

double CumulantSet::gamma(int order) const {
    require_order(order);
    return gammas_[static_cast<std::size_t>(order) - 2];
}

int CumulantSet::lambda_sign(int order) const {
    require_order(order);
    return signs_[static_cast<std::size_t>(order) - 2];
}

double CumulantSet::log_abs_lambda_base(int order) const {
    require_order(order);
    return log_abs_lambda_base_[static_cast<std::size_t>(order) - 2];
}

double CumulantSet::log_abs_lambda(int order) const {
    require_order(order);
    const double base = log_abs_lambda_base_[static_cast<std::size_t>(order) - 2];
    return base == -inf ? base : base + (1.0 - 0.5 * order) * log_t_;
}

double CumulantSet::lambda(int order) const {
    require_order(order);
    const int s = signs_[static_cast<std::size_t>(order) - 2];
    if (s == 0) return 0.0;
    return s * std::exp(log_abs_lambda(order));
}

bool CumulantSet::gaussian_like() const {
    for (std::size_t i = 1; i < signs_.size(); ++i)
        if (signs_[i] != 0) return false;
    return true;
}

namespace {

double cumulant_base(const LevyTriplet& triplet, int order) {
    double acc = order == 2 ? triplet.sigma2() : 0.0;
    try {
        acc += measure_integral(triplet.measure(),
                                [order](double u) { return ipow(u, order); });
    } catch (const moment_error&) {
        throw moment_error("moment of order " + std::to_string(order) + " does not exist");
    }
    return acc;
}

void check_cumulant_args(int order, double t) {
    if (order < 2)
        throw std::invalid_argument("cumulant: order must be >= 2 (centering owns order 1)");
    if (order > cumulant_max_order)
        throw std::invalid_argument("cumulant: order exceeds cap " +
                                    std::to_string(cumulant_max_order));
    if (!(t > 0.0) || !std::isfinite(t))
        throw std::invalid_argument("cumulant: t must be positive and finite");
}

} // namespace

double cumulant(const LevyTriplet& triplet, int order, double t) {
    check_cumulant_args(order, t);
    return t * cumulant_base(triplet, order);
}

CumulantSet cumulant_set(const LevyTriplet& triplet, int nu_max, double t) {
    if (nu_max < 0 || nu_max + 2 > cumulant_max_order)
        throw std::invalid_argument("cumulant_set: nu_max must be in [0, " +
                                    std::to_string(cumulant_max_order - 2) + "]");
    check_cumulant_args(2, t);
    std::vector<double> base;
    base.reserve(static_cast<std::size_t>(nu_max) + 1);
    for (int order = 2; order <= nu_max + 2; ++order)
        base.push_back(cumulant_base(triplet, order));
    return CumulantSet::from_base(std::move(base), t);
}

std::complex<double> characteristic_exponent(const LevyTriplet& triplet, double s) {
    if (!std::isfinite(s))
        throw std::invalid_argument("characteristic_exponent: non-finite argument");
    if (s == 0.0) return {0.0, 0.0};
    double re = -0.5 * triplet.sigma2() * s * s;
    double im = triplet.rho() * s;
    for (const auto& atom : triplet.measure().atoms) {
        re += atom.mass * detail::cos_minus_one(s * atom.x);
        im += atom.mass * detail::sin_minus_x(s * atom.x);
    }
    for (const auto& piece : triplet.measure().density_pieces) {
        try {
            re += piece_integral_over(piece, -inf, inf,
                                      [s](double u) { return detail::cos_minus_one(s * u); })
                      .value;
            im += piece_integral_over(piece, -inf, inf,
                                      [s](double u) { return detail::sin_minus_x(s * u); })
                      .value;
        } catch (const moment_error& e) {
            throw quadrature_error(std::string("characteristic exponent integral failed: ") +
                                   e.what());
        }
    }
    return {re, im};
}

namespace {

constexpr double tail_slack = 1e-7;

// Grid certificate: r_k must peak before the last quarter and be
// non-increasing across it. Ties and -inf are fine.
bool tail_envelope_certified(const std::vector<double>& r) {
    const std::size_t n = r.size();
    const std::size_t tail_start = 3 * n / 4;
    std::size_t i_max = 0;
    for (std::size_t k = 1; k < n; ++k)
        if (r[k] > r[i_max]) i_max = k;
    if (r[i_max] == -inf) return true;  // no tail mass at all
    if (i_max >= tail_start) return false;
    for (std::size_t k = tail_start; k < n; ++k) {
        if (r[k] == -inf) continue;
        const double prev = r[k - 1] == -inf ? r[k] : r[k - 1];
        if (r[k] > prev + tail_slack) return false;
    }
    return true;
}

std::vector<double> geometric_grid(double a, double b, std::size_t n) {
    std::vector<double> grid(n);
    const double ratio = std::pow(b / a, 1.0 / static_cast<double>(n - 1));
    double x = a;
    for (std::size_t k = 0; k < n; ++k) {
        grid[k] = x;
        x *= ratio;
    }
    return grid;
}

double total_log_density(const LevyMeasure& measure, double x) {
    std::vector<double> logs;
    for (const auto& piece : measure.density_pieces) {
        const double v = piece.log_density(x);
        if (v != -inf) logs.push_back(v);
    }
    return logsumexp(logs);
}

// log of the measure of [x, x+1) union (-x-1, -x].
double log_unit_interval_mass(const LevyMeasure& measure, double x) {
    std::vector<double> logs;
    for (const auto& atom : measure.atoms) {
        const bool right = atom.x >= x && atom.x < x + 1.0;
        const bool left = atom.x > -x - 1.0 && atom.x <= -x;
        if (right || left) logs.push_back(std::log(atom.mass));
    }
    const auto add_piece_mass = [&](const DensityPiece& piece, double lo, double hi) {
        const double L = std::max(lo, piece.lo);
        const double H = std::min(hi, piece.hi);
        if (!(L < H)) return;
        const double ref = std::max(piece.log_density(L), piece.log_density(H));
        if (ref == -inf) return;
        QuadratureOptions opt;
        opt.rel_tol = 1e-9;
        const auto ratio = integrate_finite(
            [&](double u) { return std::exp(piece.log_density(u) - ref); }, L, H, opt);
        if (ratio.value > 0.0) logs.push_back(ref + std::log(ratio.value));
    };
    for (const auto& piece : measure.density_pieces) {
        add_piece_mass(piece, x, x + 1.0);
        add_piece_mass(piece, -x - 1.0, -x);
    }
    return logsumexp(logs);
}

const double candidate_epsilons[] = {1.0, 0.5, 0.25, 0.1};

// Start of the tail region: beyond every atom and every finite endpoint.
double tail_region_start(const LevyMeasure& measure) {
    double a = 1.0;
    for (const auto& atom : measure.atoms) a = std::max(a, std::abs(atom.x) + 1e-9);
    for (const auto& piece : measure.density_pieces) {
        if (std::isfinite(piece.lo)) a = std::max(a, std::abs(piece.lo) + 1e-9);
        if (std::isfinite(piece.hi)) a = std::max(a, std::abs(piece.hi) + 1e-9);
    }
    return a;
}

TailCheck run_envelope_check(const std::vector<double>& grid, const std::vector<double>& log_mass,
                             double a) {
    for (double eps : candidate_epsilons) {
        std::vector<double> r(grid.size());
        double r_max = -inf;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            r[k] = log_mass[k] == -inf ? -inf : log_mass[k] + std::pow(grid[k], 1.0 + eps);
            r_max = std::max(r_max, r[k]);
        }
        if (tail_envelope_certified(r)) {
            TailCheck check;
            check.verdict = Verdict3::holds;
            check.C = std::exp(std::min(r_max == -inf ? 0.0 : r_max, 700.0));
            check.epsilon = eps;
            check.a = a;
            return check;
        }
    }
    TailCheck check;
    check.verdict = Verdict3::fails;
    check.a = a;
    return check;
}

} // namespace

bool exact_series_certified(const ConditionReport& report) {
    return report.strongest == SeriesBasis::bounded_support ||
           report.strongest == SeriesBasis::density_tail ||
           report.strongest == SeriesBasis::interval_mass_tail;
}

std::string to_string(Verdict3 v) {
    switch (v) {
        case Verdict3::holds: return "holds";
        case Verdict3::fails: return "fails";
        default: return "unknown";
    }
}

std::string to_string(SeriesBasis b) {
    switch (b) {
        case SeriesBasis::bounded_support: return "bounded_support";
        case SeriesBasis::density_tail: return "density_tail_decay";
        case SeriesBasis::interval_mass_tail: return "interval_mass_decay";
        case SeriesBasis::truncated_only: return "truncated_only";
        default: return "none";
    }
}

ConditionReport check_conditions(const LevyTriplet& triplet) {
    const LevyMeasure& measure = triplet.measure();
    ConditionReport report;
    report.cramer_declared = triplet.cramer_declared();
    report.cramer_sufficient = triplet.sigma2() > 0.0 || !measure.density_pieces.empty();

    bool bounded = true;
    double bound = 0.0;
    for (const auto& atom : measure.atoms) bound = std::max(bound, std::abs(atom.x));
    for (const auto& piece : measure.density_pieces) {
        if (!piece.bounded()) {
            bounded = false;
            break;
        }
        bound = std::max(bound, std::max(std::abs(piece.lo), std::abs(piece.hi)));
    }
    report.bounded_support = bounded ? Verdict3::holds : Verdict3::fails;
    report.support_bound = bounded ? bound : 0.0;

    if (bounded) {
        // Zero tail: both decay conditions hold with any constants.
        report.density_tail_decay = {Verdict3::holds, 1.0, 1.0, bound + 1.0};
        report.interval_mass_decay = report.density_tail_decay;
    } else {
        const double a = tail_region_start(measure);
        {
            const auto grid = geometric_grid(a, 1e6, 240);
            std::vector<double> log_mass(grid.size());
            for (std::size_t k = 0; k < grid.size(); ++k)
                log_mass[k] = std::max(total_log_density(measure, grid[k]),
                                       total_log_density(measure, -grid[k]));
            report.density_tail_decay = run_envelope_check(grid, log_mass, a);
        }
        if (report.density_tail_decay.verdict == Verdict3::holds) {
            report.interval_mass_decay = report.density_tail_decay;
        } else {
            const auto grid = geometric_grid(a, 1e4, 140);
            std::vector<double> log_mass(grid.size());
            for (std::size_t k = 0; k < grid.size(); ++k)
                log_mass[k] = log_unit_interval_mass(measure, grid[k]);
            report.interval_mass_decay = run_envelope_check(grid, log_mass, a);
        }
    }

    // Exponential-moment condition, outside (-delta, delta), delta = 1e-6.
    constexpr double delta = 1e-6;
    report.exp_moment = Verdict3::fails;
    bool saw_unknown = false;
    for (double lambda : {1.0, 0.1}) {
        try {
            double acc = 0.0;
            for (const auto& atom : measure.atoms)
                if (std::abs(atom.x) >= delta) acc += atom.mass * std::exp(lambda * std::abs(atom.x));
            for (const auto& piece : measure.density_pieces) {
                const auto g = [lambda](double u) { return std::exp(lambda * std::abs(u)); };
                acc += piece_integral_over(piece, -inf, -delta, g).value;
                acc += piece_integral_over(piece, delta, inf, g).value;
            }
            if (std::isfinite(acc)) {
                report.exp_moment = Verdict3::holds;
                report.exp_moment_lambda = lambda;
                break;
            }
            saw_unknown = true;
        } catch (const moment_error&) {
            // diverges for this lambda
        } catch (const quadrature_error&) {
            saw_unknown = true;
        }
    }
    if (report.exp_moment == Verdict3::fails && saw_unknown) report.exp_moment = Verdict3::unknown;

    const bool cramer_ok = report.cramer_declared || report.cramer_sufficient;
    SeriesBasis tail_basis = SeriesBasis::none;
    if (report.bounded_support == Verdict3::holds)
        tail_basis = SeriesBasis::bounded_support;
    else if (report.density_tail_decay.verdict == Verdict3::holds)
        tail_basis = SeriesBasis::density_tail;
    else if (report.interval_mass_decay.verdict == Verdict3::holds)
        tail_basis = SeriesBasis::interval_mass_tail;

    if (cramer_ok)
        report.strongest = tail_basis != SeriesBasis::none ? tail_basis : SeriesBasis::truncated_only;
    else
        report.strongest =
            tail_basis != SeriesBasis::none ? SeriesBasis::truncated_only : SeriesBasis::none;
    return report;
}

std::pair<AffineMap, LevyTriplet> standardize(const LevyTriplet& triplet, double t) {
    const double var = cumulant(triplet, 2, t);
    if (!(var > 0.0))
        throw std::invalid_argument("standardize: variance is zero");
    AffineMap map;
    map.shift = triplet.rho() * t;
    map.scale = std::sqrt(var);
    LevyTriplet centered(triplet.sigma2(), 0.0, triplet.measure(), triplet.cramer_declared());
    return {map, std::move(centered)};
}

double lower_support_point(const LevyTriplet& triplet, double t) {
    if (triplet.sigma2() != 0.0)
        throw std::invalid_argument(
            "one-sided support point: requires sigma2 = 0 (drift-only continuous part)");
    for (const auto& atom : triplet.measure().atoms)
        if (atom.x <= 0.0)
            throw std::invalid_argument("one-sided support point: measure has non-positive atoms");
    for (const auto& piece : triplet.measure().density_pieces)
        if (piece.lo < 0.0)
            throw std::invalid_argument(
                "one-sided support point: measure has mass on the negative axis");
    double m1 = 0.0;
    try {
        m1 = measure_integral(triplet.measure(), [](double u) { return u; });
    } catch (const moment_error&) {
        throw moment_error("one-sided support point: jumps have infinite variation");
    }
    const double vt = std::sqrt(cumulant(triplet, 2, t));
    return -t * m1 / vt;
}

} // namespace levyedge
