#pragma once

// Adaptive Gauss-Kronrod over a list of panels. Integrands are expected to be
// pre-scaled so their magnitude is O(1).

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cascade/errors.hpp"

namespace cascade {

struct QuadOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-13;
    unsigned max_depth = 14;  // at most 2^14 leaves per panel
};

template <class T>
struct QuadResult {
    T value{};
    double error = 0.0;
    double l1 = 0.0;
};

namespace detail {

// Recursive bisection on top of the single-panel Kronrod rule. A leaf is
// accepted once its error estimate meets the tolerance or the roundoff floor
// of its own L1 mass.
// One 15-point Kronrod panel with the embedded 7-point Gauss rule; error is
// the raw |K - G| so it scales with the panel.
template <class T, class F>
T gk15(F& f, double a, double b, double& err, double& l1) {
    using boost::math::quadrature::gauss;
    using boost::math::quadrature::gauss_kronrod;
    static const auto& xk = gauss_kronrod<double, 15>::abscissa();
    static const auto& wk = gauss_kronrod<double, 15>::weights();
    static const auto& wg = gauss<double, 7>::weights();
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const T fc = f(c);
    T k = wk[0] * fc;
    T g = wg[0] * fc;
    double abs_sum = wk[0] * std::abs(fc);
    for (std::size_t i = 1; i < xk.size(); ++i) {
        const T f1 = f(c - h * xk[i]);
        const T f2 = f(c + h * xk[i]);
        k += wk[i] * (f1 + f2);
        abs_sum += wk[i] * (std::abs(f1) + std::abs(f2));
        if (i % 2 == 0) g += wg[i / 2] * (f1 + f2);
    }
    err = std::abs(h * (k - g));
    l1 = h * abs_sum;
    return h * k;
}

// Recursive bisection. A leaf is accepted once its error estimate meets the
// tolerance or the roundoff floor of its own L1 mass.
template <class T, class F>
void gk_adapt(F& f, double a, double b, const QuadOptions& opt, double abs_share, unsigned depth, QuadResult<T>& out) {
    double err = 0.0;
    double l1 = 0.0;
    T v = gk15<T>(f, a, b, err, l1);
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * l1;
    if (err <= std::max({abs_share * (b - a), opt.rel_tol * l1, floor}) || depth >= opt.max_depth) {
        out.value += v;
        out.error += err;
        out.l1 += l1;
        return;
    }
    const double m = 0.5 * (a + b);
    gk_adapt<T>(f, a, m, opt, abs_share, depth + 1, out);
    gk_adapt<T>(f, m, b, opt, abs_share, depth + 1, out);
}

}  // namespace detail

// Integrates f over consecutive [nodes[i], nodes[i+1]].
template <class T, class F>
QuadResult<T> integrate_panels(F&& f, const std::vector<double>& nodes, const QuadOptions& opt = {}) {
    QuadResult<T> out;
    if (nodes.size() < 2) return out;
    const double span = nodes.back() - nodes.front();
    const double abs_share = span > 0.0 ? opt.abs_tol / span : opt.abs_tol;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const double a = nodes[i];
        const double b = nodes[i + 1];
        if (!(b > a)) continue;
        detail::gk_adapt<T>(f, a, b, opt, abs_share, 0, out);
    }
    const double allowed = std::max({opt.abs_tol, 10.0 * opt.rel_tol * out.l1,
                                     256.0 * std::numeric_limits<double>::epsilon() * out.l1});
    if (!(out.error <= allowed)) throw QuadratureError("adaptive quadrature did not converge", out.error);
    return out;
}

template <class T, class F>
QuadResult<T> integrate(F&& f, double a, double b, const QuadOptions& opt = {}) {
    return integrate_panels<T>(std::forward<F>(f), std::vector<double>{a, b}, opt);
}

// Sorted, deduplicated nodes in [a, b] including a and b, with the interior
// breakpoints and `split` extra equal subdivisions of every resulting panel.
inline std::vector<double> make_nodes(double a, double b, std::vector<double> interior, int split = 1) {
    interior.push_back(a);
    interior.push_back(b);
    std::vector<double> pts;
    for (double x : interior)
        if (x >= a && x <= b) pts.push_back(x);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (split <= 1) return pts;
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        for (int k = 0; k < split; ++k) out.push_back(pts[i] + (pts[i + 1] - pts[i]) * k / split);
    out.push_back(pts.back());
    return out;
}

}  // namespace cascade
