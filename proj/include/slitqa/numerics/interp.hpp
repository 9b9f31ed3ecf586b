#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace slitqa {

/// Cubic Hermite interpolant on a uniform grid over [a, b] with known slopes.
class HermiteTable {
public:
    HermiteTable() = default;
    HermiteTable(double a, double b, std::vector<double> values, std::vector<double> slopes);

    double operator()(double x) const;
    double derivative(double x) const;
    double a() const { return a_; }
    double b() const { return b_; }
    std::size_t size() const { return y_.size(); }

private:
    std::size_t locate(double x, double& t) const;
    double a_{0.0}, b_{1.0}, h_{1.0};
    std::vector<double> y_, d_;
};

/// Natural cubic spline through (x_i, y_i) with strictly increasing x.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    double derivative(double x) const;

private:
    std::size_t locate(double x) const;
    std::vector<double> x_, y_, m_;
};

/// Four-point Lagrange interpolation of uniformly sampled values v_k = f(x0 + k h).
/// T needs + and scalar *; works for Eigen fixed-size matrices.
template <typename T>
T lagrange4(const std::vector<T>& v, double x0, double h, double x) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(v.size());
    if (n < 4) throw std::invalid_argument("lagrange4: need at least four samples");
    const double u = (x - x0) / h;
    std::ptrdiff_t k = static_cast<std::ptrdiff_t>(std::floor(u)) - 1;
    k = std::clamp<std::ptrdiff_t>(k, 0, n - 4);
    const double t = u - static_cast<double>(k);  // nodes at 0, 1, 2, 3
    const double w0 = -(t - 1) * (t - 2) * (t - 3) / 6.0;
    const double w1 = t * (t - 2) * (t - 3) / 2.0;
    const double w2 = -t * (t - 1) * (t - 3) / 2.0;
    const double w3 = t * (t - 1) * (t - 2) / 6.0;
    return T(w0 * v[k] + w1 * v[k + 1] + w2 * v[k + 2] + w3 * v[k + 3]);
}

} // namespace slitqa
