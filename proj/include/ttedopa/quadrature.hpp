// quadrature.hpp — Gauss–Legendre panels and adaptive integration
//
// Composite Gauss–Legendre quadrature over a breakpoint-partitioned interval.
// Breakpoints let callers pin panel edges to known structure (narrow peaks,
// kinks at zero) so the adaptive bisection never has to discover them.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

#include "ttedopa/errors.hpp"

namespace ttedopa::quad {

struct Rule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;  // sum to 2
};

// Gauss–Legendre rule of the given order, computed by Newton iteration on
// P_n and cached. Nodes are accurate to ~1 ulp.
inline const Rule& gauss_legendre(int order) {
    static std::map<int, Rule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(order);
    if (it != cache.end()) return it->second;

    if (order < 1) throw validation_error("gauss_legendre: order must be >= 1");
    Rule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const int n = order;
    const int half = (n + 1) / 2;
    for (int k = 0; k < half; ++k) {
        double x = std::cos(std::numbers::pi * (k + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Legendre recurrence: p0 = 1, p1 = x
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        // one polishing pass for the weight
        double p0 = 1.0, p1 = x;
        for (int j = 2; j <= n; ++j) {
            double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        rule.nodes[k] = -x;
        rule.nodes[n - 1 - k] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[k] = w;
        rule.weights[n - 1 - k] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    auto [pos, inserted] = cache.emplace(order, std::move(rule));
    return pos->second;
}

namespace detail {

template <class T>
struct Accum {
    using type = long double;
};
template <class T>
struct Accum<std::complex<T>> {
    using type = std::complex<long double>;
};

template <class V>
double magnitude(const V& v) {
    return std::abs(v);
}

}  // namespace detail

// Fixed-order Gauss–Legendre on a single panel. l1_out, when given,
// accumulates the L1 mass of the summed terms (the rounding-error scale).
template <class F>
auto panel_integral(F&& f, double a, double b, int order, double* l1_out = nullptr) {
    const Rule& rule = gauss_legendre(order);
    const double mid = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    using V = decltype(f(mid));
    typename detail::Accum<V>::type sum{};
    double l1 = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        V term = rule.weights[i] * f(mid + hw * rule.nodes[i]);
        sum += typename detail::Accum<V>::type(term);
        l1 += detail::magnitude(term);
    }
    if (l1_out) *l1_out += l1 * hw;
    return V(sum * static_cast<long double>(hw));
}

template <class V>
struct Integral {
    V value{};
    double error_estimate = 0.0;
};

namespace detail {

// Relative rounding floor: below this, refinement cannot help in binary64.
inline constexpr double kRoundFloor = 32.0 * std::numeric_limits<double>::epsilon();

template <class F, class V>
void adapt(F& f, double a, double b, double tol, int order, int depth,
           typename Accum<V>::type& total, double& err_total, double& l1_total, int max_depth) {
    double l1 = 0.0;
    V coarse = panel_integral(f, a, b, order);
    V fine = panel_integral(f, a, b, 2 * order, &l1);
    double err = magnitude<V>(fine - coarse);
    if (err <= std::max(tol, kRoundFloor * l1) || depth >= max_depth) {
        total += typename Accum<V>::type(fine);
        err_total += err;
        l1_total += l1;
        return;
    }
    double mid = 0.5 * (a + b);
    adapt<F, V>(f, a, mid, 0.5 * tol, order, depth + 1, total, err_total, l1_total, max_depth);
    adapt<F, V>(f, mid, b, 0.5 * tol, order, depth + 1, total, err_total, l1_total, max_depth);
}

}  // namespace detail

// Adaptive composite integration over [pts.front(), pts.back()] with panel
// edges at every interior breakpoint. abs_tol is a global absolute target;
// throws numerical_error when bisection bottoms out above both the target
// and the rounding floor of the integrand's L1 mass.
template <class F>
auto integrate(F&& f, const std::vector<double>& pts, double abs_tol = 1e-10,
               int order = 15, int max_depth = 32) {
    if (pts.size() < 2) throw validation_error("integrate: need at least two breakpoints");
    using V = decltype(f(pts.front()));
    typename detail::Accum<V>::type total{};
    double err_total = 0.0;
    double l1_total = 0.0;
    const double span = pts.back() - pts.front();
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        double a = pts[i], b = pts[i + 1];
        if (!(b > a)) continue;
        double tol = abs_tol * std::max(1e-3, (b - a) / span);
        detail::adapt<F, V>(f, a, b, tol, order, 0, total, err_total, l1_total, max_depth);
    }
    if (err_total > std::max(10.0 * abs_tol, 4.0 * detail::kRoundFloor * l1_total)) {
        throw numerical_error("quadrature did not converge: achieved error estimate " +
                              std::to_string(err_total) + " vs requested " + std::to_string(abs_tol));
    }
    return Integral<V>{V(total), err_total};
}

// Sorted unique breakpoints clipped to [lo, hi]; endpoints always included.
inline std::vector<double> clip_breakpoints(std::vector<double> pts, double lo, double hi) {
    pts.push_back(lo);
    pts.push_back(hi);
    std::sort(pts.begin(), pts.end());
    std::vector<double> out;
    for (double p : pts) {
        if (p < lo || p > hi) continue;
        if (out.empty() || p > out.back() + 1e-12 * (std::abs(p) + 1.0)) out.push_back(p);
    }
    if (out.size() < 2) out = {lo, hi};
    out.front() = lo;
    out.back() = hi;
    return out;
}

// Subdivide panels until none is wider than max_width.
inline std::vector<double> subdivide(const std::vector<double>& pts, double max_width) {
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        double a = pts[i], b = pts[i + 1];
        out.push_back(a);
        int k = static_cast<int>(std::ceil((b - a) / max_width));
        for (int j = 1; j < k; ++j) out.push_back(a + (b - a) * j / k);
    }
    out.push_back(pts.back());
    return out;
}

struct DiscreteMeasure {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Composite Gauss–Legendre discretization of w(x) dx: per-panel rule of the
// given order, weights scaled by the density. Used as the inner measure for
// the Lanczos recurrence procedure.
template <class W>
DiscreteMeasure discretize(W&& density, const std::vector<double>& pts, int order) {
    const Rule& rule = gauss_legendre(order);
    DiscreteMeasure m;
    m.nodes.reserve((pts.size() - 1) * rule.nodes.size());
    m.weights.reserve(m.nodes.capacity());
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        double a = pts[i], b = pts[i + 1];
        if (!(b > a)) continue;
        double mid = 0.5 * (a + b), hw = 0.5 * (b - a);
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
            double x = mid + hw * rule.nodes[k];
            double w = hw * rule.weights[k] * density(x);
            m.nodes.push_back(x);
            m.weights.push_back(w);
        }
    }
    return m;
}

}  // namespace ttedopa::quad
