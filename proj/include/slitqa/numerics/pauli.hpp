#pragma once

#include <cmath>
#include <stdexcept>

#include "slitqa/numerics/types.hpp"

namespace slitqa {

/// Coefficients of c0 I + cx X + cy Y + cz Z.
template <typename Scalar>
struct PauliVector {
    using C = std::complex<Scalar>;
    C c0{}, cx{}, cy{}, cz{};

    static PauliVector from_matrix(const Matrix2<Scalar>& m) {
        const C half(Scalar(0.5), Scalar(0));
        const C i(Scalar(0), Scalar(1));
        return {half * (m(0, 0) + m(1, 1)), half * (m(0, 1) + m(1, 0)),
                half * i * (m(0, 1) - m(1, 0)), half * (m(0, 0) - m(1, 1))};
    }

    Matrix2<Scalar> to_matrix() const {
        const C i(Scalar(0), Scalar(1));
        Matrix2<Scalar> m;
        m << c0 + cz, cx - i * cy, cx + i * cy, c0 - cz;
        return m;
    }

    bool is_hermitian(Scalar tol = Scalar(1e-12)) const {
        using std::abs;
        return abs(c0.imag()) <= tol && abs(cx.imag()) <= tol && abs(cy.imag()) <= tol &&
               abs(cz.imag()) <= tol;
    }

    Eigen::Matrix<Scalar, 3, 1> vector_part() const { return {cx.real(), cy.real(), cz.real()}; }

    static PauliVector from_real(Scalar c0, const Eigen::Matrix<Scalar, 3, 1>& v) {
        return {C(c0), C(v.x()), C(v.y()), C(v.z())};
    }
};

using PauliVectord = PauliVector<double>;

namespace pauli {
inline Matrix2c I() { return Matrix2c::Identity(); }
inline Matrix2c X() { Matrix2c m; m << 0, 1, 1, 0; return m; }
inline Matrix2c Y() { Matrix2c m; m << 0, complex_t(0, -1), complex_t(0, 1), 0; return m; }
inline Matrix2c Z() { Matrix2c m; m << 1, 0, 0, -1; return m; }
} // namespace pauli

/// exp(-i h) for Hermitian h, via U = e^{-i c0} (I cos η − i n̂·σ sin η).
template <typename Scalar>
Matrix2<Scalar> su2_exp(const PauliVector<Scalar>& h) {
    using std::cos;
    using std::sin;
    using std::sqrt;
    using C = std::complex<Scalar>;
    if (!h.is_hermitian()) throw std::invalid_argument("su2_exp: generator is not Hermitian");
    const auto v = h.vector_part();
    const Scalar eta = v.norm();
    // sin(η)/η without the 0/0 at the origin
    const Scalar sinc = eta < Scalar(1e-8) ? Scalar(1) - eta * eta / Scalar(6) : sin(eta) / eta;
    const C i(Scalar(0), Scalar(1));
    const Scalar c = cos(eta);
    Matrix2<Scalar> u;
    u << C(c) - i * sinc * v.z(), -i * sinc * C(v.x(), -v.y()),
         -i * sinc * C(v.x(), v.y()), C(c) + i * sinc * v.z();
    return std::exp(-i * h.c0.real()) * u;
}

template <typename Scalar>
Matrix2<Scalar> su2_exp(const Matrix2<Scalar>& h) {
    return su2_exp(PauliVector<Scalar>::from_matrix(h));
}

/// Largest entry of |U†U − I|.
template <typename Derived>
double unitarity_error(const Eigen::MatrixBase<Derived>& u) {
    const Matrix2c d = u.adjoint() * u - Matrix2c::Identity();
    return d.cwiseAbs().maxCoeff();
}

struct DensityDiagnostics {
    double trace_error{0.0};
    double hermiticity_error{0.0};
    double min_eigenvalue{0.0};
};

template <typename Derived>
DensityDiagnostics density_diagnostics(const Eigen::MatrixBase<Derived>& rho) {
    DensityDiagnostics d;
    d.trace_error = std::abs(rho.trace() - complex_t(1.0));
    d.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    const Matrix2c h = 0.5 * (rho + rho.adjoint());
    const double a = h(0, 0).real(), b = h(1, 1).real();
    const double r = std::hypot(0.5 * (a - b), std::abs(h(0, 1)));
    d.min_eigenvalue = 0.5 * (a + b) - r;
    return d;
}

} // namespace slitqa
