#include "slitqa/numerics/interp.hpp"

namespace slitqa {

HermiteTable::HermiteTable(double a, double b, std::vector<double> values,
                           std::vector<double> slopes)
    : a_(a), b_(b), y_(std::move(values)), d_(std::move(slopes)) {
    if (y_.size() < 2 || y_.size() != d_.size() || !(b > a))
        throw std::invalid_argument("HermiteTable: inconsistent table");
    h_ = (b_ - a_) / static_cast<double>(y_.size() - 1);
}

std::size_t HermiteTable::locate(double x, double& t) const {
    const double u = (x - a_) / h_;
    const std::size_t last = y_.size() - 2;
    std::size_t i = u <= 0 ? 0 : std::min(static_cast<std::size_t>(u), last);
    t = u - static_cast<double>(i);
    return i;
}

double HermiteTable::operator()(double x) const {
    double t;
    const std::size_t i = locate(x, t);
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y_[i] + (t3 - 2 * t2 + t) * h_ * d_[i] +
           (-2 * t3 + 3 * t2) * y_[i + 1] + (t3 - t2) * h_ * d_[i + 1];
}

double HermiteTable::derivative(double x) const {
    double t;
    const std::size_t i = locate(x, t);
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * y_[i] + (-6 * t2 + 6 * t) * y_[i + 1]) / h_ +
           (3 * t2 - 4 * t + 1) * d_[i] + (3 * t2 - 2 * t) * d_[i + 1];
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 3 || y_.size() != n) throw std::invalid_argument("CubicSpline: need >= 3 matching points");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("CubicSpline: abscissae not increasing");
    // second derivatives from the natural-spline tridiagonal system
    m_.assign(n, 0.0);
    std::vector<double> c(n, 0.0), r(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
        const double diag = 2 * (h0 + h1) - h0 * c[i - 1];
        c[i] = h1 / diag;
        r[i] = (6 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0) - h0 * r[i - 1]) / diag;
    }
    for (std::size_t i = n - 2; i >= 1; --i) m_[i] = r[i] - c[i] * m_[i + 1];
}

std::size_t CubicSpline::locate(double x) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    return std::min(i, x_.size() - 2);
}

double CubicSpline::operator()(double x) const {
    const std::size_t i = locate(x);
    const double h = x_[i + 1] - x_[i];
    const double A = (x_[i + 1] - x) / h, B = (x - x_[i]) / h;
    return A * y_[i] + B * y_[i + 1] + ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h * h / 6;
}

double CubicSpline::derivative(double x) const {
    const std::size_t i = locate(x);
    const double h = x_[i + 1] - x_[i];
    const double A = (x_[i + 1] - x) / h, B = (x - x_[i]) / h;
    return (y_[i + 1] - y_[i]) / h - (3 * A * A - 1) * h * m_[i] / 6 + (3 * B * B - 1) * h * m_[i + 1] / 6;
}

} // namespace slitqa
