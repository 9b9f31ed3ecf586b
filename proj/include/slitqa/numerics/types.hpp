#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace slitqa {

using complex_t = std::complex<double>;

template <typename Scalar>
using Matrix2 = Eigen::Matrix<std::complex<Scalar>, 2, 2>;
template <typename Scalar>
using Vector2 = Eigen::Matrix<std::complex<Scalar>, 2, 1>;

using Matrix2c = Matrix2<double>;
using Vector2c = Vector2<double>;

/** Unitary 2x2 propagator; checked with unitarity_error(). */
using Unitary2 = Matrix2c;
/** 2x2 density matrix; checked with density_diagnostics(). */
using Density2 = Matrix2c;

inline constexpr double pi = 3.14159265358979323846;

/// Numerical tolerances shared by every solver.
struct ToleranceConfig {
    double ode_rel_tol{1e-10};
    double ode_abs_tol{1e-12};
    double quad_tol{1e-10};

    void validate() const {
        if (!(ode_rel_tol > 0.0) || !(ode_abs_tol > 0.0) || !(quad_tol > 0.0))
            throw std::invalid_argument("ToleranceConfig: tolerances must be strictly positive");
    }
};

/// Thrown by integrators and quadratures that cannot reach the requested accuracy.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace slitqa
