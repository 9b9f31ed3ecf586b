#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <vector>

#include "slitqa/numerics/types.hpp"

namespace slitqa {

struct QuadOptions {
    double abs_tol{1e-10};
    double rel_tol{0.0};
    std::size_t max_intervals{20000};
};

template <typename T>
struct QuadResult {
    T value{};
    double error{0.0};
    std::size_t evaluations{0};
};

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> x, w;
};
GaussRule gauss_legendre(int n);

namespace detail {

inline constexpr double gk_x[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double gk_w[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double g7_w[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename T>
struct Panel {
    double a, b;
    T value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <typename T, typename F>
Panel<T> gk15(F& f, double a, double b) {
    const double c = 0.5 * (a + b), r = 0.5 * (b - a);
    const T fc = f(c);
    T kron = gk_w[7] * fc;
    T gauss = g7_w[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = r * gk_x[j];
        const T s = f(c - dx) + f(c + dx);
        kron += gk_w[j] * s;
        if (j % 2 == 1) gauss += g7_w[j / 2] * s;
    }
    return {a, b, r * kron, std::abs(r * (kron - gauss))};
}

} // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) quadrature of f over [a, b].
/// Interior breakpoints seed the initial partition.
template <typename F>
auto quad(F&& f, double a, double b, const QuadOptions& opt = {},
          const std::vector<double>& breakpoints = {}) {
    using T = std::decay_t<decltype(f(a))>;
    QuadResult<T> res;
    if (a == b) return res;
    const double sign = b > a ? 1.0 : -1.0;
    if (sign < 0) std::swap(a, b);

    std::vector<double> cuts{a};
    for (double p : breakpoints)
        if (p > a && p < b) cuts.push_back(p);
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(b);

    std::priority_queue<detail::Panel<T>> heap;
    T total{};
    double err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] <= cuts[i]) continue;
        auto p = detail::gk15<T>(f, cuts[i], cuts[i + 1]);
        total += p.value;
        err += p.error;
        heap.push(p);
    }
    std::size_t evals = 15 * heap.size();
    auto target = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };
    while (err > target()) {
        if (heap.size() >= opt.max_intervals) {
            char msg[200];
            std::snprintf(msg, sizeof msg,
                          "quad: no convergence on [%.6g, %.6g] (error %.3g, target %.3g)", a, b,
                          err, target());
            throw SolverError(msg);
        }
        auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw SolverError("quad: interval collapsed below machine resolution");
        }
        auto left = detail::gk15<T>(f, worst.a, mid);
        auto right = detail::gk15<T>(f, mid, worst.b);
        evals += 30;
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // re-sum to shed accumulated cancellation from the running updates
    T sum{};
    double esum = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        esum += heap.top().error;
        heap.pop();
    }
    res.value = sign * sum;
    res.error = esum;
    res.evaluations = evals;
    return res;
}

/// ∫_a^∞ f(x) dx through the map x = a + scale·u/(1-u).
template <typename F>
auto quad_semi_infinite(F&& f, double a, double scale, const QuadOptions& opt = {}) {
    auto g = [&](double u) {
        const double one_minus = 1.0 - u;
        const double x = a + scale * u / one_minus;
        return f(x) * (scale / (one_minus * one_minus));
    };
    return quad(g, 0.0, 1.0, opt);
}

/// Principal value of ∫_a^b g(x)/(x − pole) dx with pole strictly inside (a, b).
/// The symmetric neighbourhood of the pole is folded onto [0, h] where the
/// subtracted integrand [g(c+u) − g(c−u)]/u is regular. Kinks of g go in breakpoints.
template <typename F>
QuadResult<double> quad_pv(F&& g, double pole, double a, double b, const QuadOptions& opt = {},
                           const std::vector<double>& breakpoints = {}) {
    if (!(pole > a && pole < b)) throw std::invalid_argument("quad_pv: pole must lie in (a, b)");
    const double h = std::min(pole - a, b - pole);
    QuadOptions sub = opt;
    sub.abs_tol = opt.abs_tol / 2;
    std::vector<double> folded_cuts;
    for (double p : breakpoints) folded_cuts.push_back(std::abs(p - pole));
    auto folded = [&](double u) { return (g(pole + u) - g(pole - u)) / u; };
    auto core = quad(folded, 0.0, h, sub, folded_cuts);
    QuadResult<double> tail;
    auto plain = [&](double x) { return g(x) / (x - pole); };
    if (pole - h > a) tail = quad(plain, a, pole - h, sub, breakpoints);
    if (pole + h < b) tail = quad(plain, pole + h, b, sub, breakpoints);
    return {core.value + tail.value, core.error + tail.error, core.evaluations + tail.evaluations};
}

} // namespace slitqa
