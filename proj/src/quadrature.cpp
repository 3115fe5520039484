#include "levyedge/quadrature.hpp"

#include "levyedge/errors.hpp"

#include <array>
#include <cmath>

namespace levyedge {

namespace {

constexpr int gl_points = 20;

struct GlRule {
    std::array<double, gl_points> nodes;
    std::array<double, gl_points> weights;
};

// Nodes of the 20-point Gauss-Legendre rule on [-1, 1], by Newton iteration
// on the Legendre recurrence (gauleg).
GlRule make_rule() {
    GlRule rule{};
    constexpr double pi = 3.14159265358979323846;
    const int n = gl_points;
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[static_cast<std::size_t>(i)] = -x;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    return rule;
}

double gl_segment(const std::function<double(double)>& f, double a, double b) {
    static const GlRule rule = make_rule();
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < gl_points; ++i)
        acc += rule.weights[static_cast<std::size_t>(i)] *
               f(mid + half * rule.nodes[static_cast<std::size_t>(i)]);
    return acc * half;
}

struct AdaptiveState {
    const std::function<double(double)>* f = nullptr;
    QuadratureOptions opt;
    long segments = 0;
    double error = 0.0;
};

double adapt(AdaptiveState& st, double a, double b, double whole, int depth) {
    if (++st.segments > (1L << 20))
        throw quadrature_error("adaptive quadrature: segment budget exhausted");
    const double mid = 0.5 * (a + b);
    const double left = gl_segment(*st.f, a, mid);
    const double right = gl_segment(*st.f, mid, b);
    const double refined = left + right;
    if (!std::isfinite(refined))
        throw quadrature_error("adaptive quadrature: non-finite integrand");
    const double err = std::abs(whole - refined);
    if (err <= st.opt.rel_tol * std::abs(refined) + st.opt.abs_floor || depth >= st.opt.max_depth) {
        if (depth >= st.opt.max_depth && err > 1e-8 * std::abs(refined) + st.opt.abs_floor)
            throw quadrature_error("adaptive quadrature: depth cap before tolerance");
        st.error += err;
        return refined;
    }
    return adapt(st, a, mid, left, depth + 1) + adapt(st, mid, b, right, depth + 1);
}

} // namespace

QuadratureResult integrate_finite(const std::function<double(double)>& f, double a, double b,
                                  const QuadratureOptions& opt) {
    if (a == b) return {0.0, 0.0};
    AdaptiveState st;
    st.f = &f;
    st.opt = opt;
    const double whole = gl_segment(f, a, b);
    QuadratureResult res;
    res.value = adapt(st, a, b, whole, 0);
    res.error_estimate = st.error;
    return res;
}

namespace {

// Sums e-folding windows of g over y in [y_start, y_start + dir*k), stopping
// when three consecutive windows are negligible against the running total.
QuadratureResult sum_windows(const std::function<double(double)>& g, double y_start, int dir,
                             const QuadratureOptions& opt) {
    constexpr int max_windows = 160;
    QuadratureResult total;
    double comp = 0.0; // Kahan carry
    int quiet = 0;
    double prev_mag = 0.0;
    int grow = 0;
    for (int k = 0; k < max_windows; ++k) {
        const double y0 = y_start + dir * static_cast<double>(k);
        const double y1 = y_start + dir * static_cast<double>(k + 1);
        if (!std::isfinite(g(0.5 * (y0 + y1))))
            throw moment_error("tail integral diverges (integrand overflow)");
        QuadratureResult w;
        try {
            w = integrate_finite(g, std::min(y0, y1), std::max(y0, y1), opt);
        } catch (const quadrature_error&) {
            if (grow >= 2) throw moment_error("tail integral diverges (growing windows overflow)");
            throw;
        }
        if (!std::isfinite(w.value))
            throw moment_error("tail integral diverges (non-finite window)");
        const double y_ = w.value - comp;
        const double t_ = total.value + y_;
        comp = (t_ - total.value) - y_;
        total.value = t_;
        total.error_estimate += w.error_estimate;
        if (std::abs(total.value) > 1e250)
            throw moment_error("tail integral diverges");
        const double mag = std::abs(w.value);
        const double scale = std::max(std::abs(total.value), opt.abs_floor);
        if (mag <= opt.rel_tol * scale + opt.abs_floor) {
            if (++quiet >= 3) return total;
        } else {
            quiet = 0;
        }
        if (k > 0 && mag >= prev_mag && mag > opt.abs_floor)
            ++grow;
        else
            grow = 0;
        prev_mag = mag;
        if (grow >= 40)
            throw moment_error("tail integral diverges (non-decaying windows)");
    }
    throw moment_error("tail integral did not converge within the window budget");
}

} // namespace

QuadratureResult integrate_right_tail(const std::function<double(double)>& f, double a,
                                      double scale, const QuadratureOptions& opt) {
    if (scale <= 0.0) scale = 1.0;
    const auto g = [&f, a, scale](double y) {
        const double e = std::exp(y);
        return f(a + scale * e) * scale * e;
    };
    // y <= -40 contributes at most sup|f| * scale * e^{-40}.
    auto head = integrate_finite(g, -40.0, 0.0, opt);
    auto tail = sum_windows(g, 0.0, +1, opt);
    return {head.value + tail.value, head.error_estimate + tail.error_estimate};
}

QuadratureResult integrate_left_tail(const std::function<double(double)>& f, double b,
                                     double scale, const QuadratureOptions& opt) {
    const auto mirrored = [&f](double u) { return f(-u); };
    return integrate_right_tail(mirrored, -b, scale, opt);
}

QuadratureResult integrate_from_zero(const std::function<double(double)>& f, double b,
                                     const QuadratureOptions& opt) {
    if (b <= 0.0)
        throw std::invalid_argument("integrate_from_zero: upper limit must be positive");
    const double yb = std::log(b);
    const auto g = [&f](double y) {
        const double e = std::exp(y);
        return f(e) * e;
    };
    return sum_windows(g, yb, -1, opt);
}

} // namespace levyedge
