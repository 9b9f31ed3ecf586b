#include <doctest.h>

#include <random>

#include "slitqa/numerics/interp.hpp"
#include "slitqa/numerics/ode.hpp"
#include "slitqa/numerics/pauli.hpp"
#include "slitqa/numerics/quadrature.hpp"
#include "slitqa/numerics/special.hpp"

using namespace slitqa;

namespace {

// exp(-i h) by scaling and squaring a 30-term Taylor series
Matrix2c series_exp(const Matrix2c& h) {
    const int squarings = 10;
    const Matrix2c a = complex_t(0, -1) * h / std::pow(2.0, squarings);
    Matrix2c term = Matrix2c::Identity(), sum = Matrix2c::Identity();
    for (int k = 1; k <= 30; ++k) {
        term = term * a / static_cast<double>(k);
        sum += term;
    }
    for (int k = 0; k < squarings; ++k) sum = sum * sum;
    return sum;
}

PauliVectord random_hermitian(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    return {complex_t(u(rng)), complex_t(u(rng)), complex_t(u(rng)), complex_t(u(rng))};
}

} // namespace

TEST_CASE("pauli round trip is exact") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int n = 0; n < 50; ++n) {
        Matrix2c m;
        for (int i = 0; i < 4; ++i) m(i / 2, i % 2) = complex_t(u(rng), u(rng));
        const Matrix2c back = PauliVectord::from_matrix(m).to_matrix();
        CHECK((back - m).cwiseAbs().maxCoeff() < 1e-15);
    }
    CHECK(PauliVectord{0, 1, 0, 0}.to_matrix() == pauli::X());
    CHECK(PauliVectord{0, 0, 1, 0}.to_matrix() == pauli::Y());
    CHECK(PauliVectord{0, 0, 0, 1}.to_matrix() == pauli::Z());
}

TEST_CASE("su2_exp special cases") {
    CHECK((su2_exp(PauliVectord{}) - Matrix2c::Identity()).norm() < 1e-15);
    const Matrix2c u = su2_exp(PauliVectord{0, pi / 2, 0, 0});
    CHECK((u - complex_t(0, -1) * pauli::X()).norm() < 1e-15);
    CHECK_THROWS_AS(su2_exp(PauliVectord{0, complex_t(0, 1), 0, 0}), std::invalid_argument);
}

TEST_CASE("su2_exp matches series oracle and stays unitary") {
    std::mt19937 rng(11);
    for (int n = 0; n < 200; ++n) {
        const auto h = random_hermitian(rng);
        const Matrix2c u = su2_exp(h);
        CHECK((u - series_exp(h.to_matrix())).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(unitarity_error(u) < 1e-12);
        CHECK(std::abs(std::abs(u.determinant()) - 1.0) < 1e-12);
    }
}

TEST_CASE("dawson values") {
    CHECK(dawson(0.0) == 0.0);
    // quadrature oracle of the defining integral
    QuadOptions tight{1e-15, 1e-15};
    for (double x : {0.05, 0.19, 0.21, 0.5, 1.0, 1.7, 2.5, 4.0, 6.3, 9.5, 10.5, 14.0}) {
        const double ref =
            quad([x](double t) { return std::exp(t * t - x * x); }, 0.0, x, tight).value;
        CHECK(std::abs(dawson(x) - ref) < 1e-12);
        CHECK(dawson(-x) == -dawson(x));
    }
    const double x = 50.0;
    // two-term asymptote; its truncation error is the next term 3/(8x^5)
    const double asym = 1 / (2 * x) + 1 / (4 * x * x * x);
    const double next = 3 / (8 * std::pow(x, 5));
    CHECK(std::abs(dawson(x) - asym) <= next * 1.01);
    CHECK(std::abs(dawson(x) - asym - next) / asym < 1e-8);
}

TEST_CASE("dawson satisfies its differential equation") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-12, 12);
    const double h = 1e-5;
    for (int n = 0; n < 200; ++n) {
        const double x = u(rng);
        const double fd = (dawson(x - 2 * h) - 8 * dawson(x - h) + 8 * dawson(x + h) - dawson(x + 2 * h)) / (12 * h);
        CHECK(std::abs(fd - (1 - 2 * x * dawson(x))) < 1e-8);
    }
}

TEST_CASE("normal cdf") {
    CHECK(erfc_cdf(0.0) == 0.5);
    CHECK(slitqa::erfc(0.0) == 1.0);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-8, 8);
    for (int n = 0; n < 100; ++n) {
        const double x = u(rng);
        CHECK(std::abs(erfc_cdf(x) + erfc_cdf(-x) - 1.0) < 1e-14);
    }
}

TEST_CASE("ode exponential decay and dense output") {
    using V = Eigen::Matrix<double, 1, 1>;
    ToleranceConfig tol;
    auto traj = integrate_ode([](double, const V& y) { return V(-y); }, V(1.0), 0.0, 1.0, tol);
    CHECK(std::abs(traj.back()(0) - std::exp(-1.0)) < 1e-9);
    for (double t : {0.013, 0.37, 0.5, 0.91})
        CHECK(std::abs(traj(t)(0) - std::exp(-t)) < 1e-9);
}

TEST_CASE("ode phase rotation conserves norm") {
    using V = Eigen::Matrix<complex_t, 1, 1>;
    ToleranceConfig tol;
    auto traj = integrate_ode([](double, const V& y) { return V(complex_t(0, 1) * y(0)); },
                              V(complex_t(1, 0)), 0.0, 10.0, tol);
    CHECK(std::abs(std::abs(traj.back()(0)) - 1.0) < 1e-9);
    CHECK(std::abs(traj.back()(0) - std::exp(complex_t(0, 10))) < 1e-8);
}

TEST_CASE("ode constant hamiltonian matches su2_exp") {
    const PauliVectord h{0.3, 0.7, -1.1, 0.4};
    const Matrix2c H = h.to_matrix();
    ToleranceConfig tol;
    auto traj = integrate_ode(
        [&](double, const Vector2c& psi) { return Vector2c(complex_t(0, -1) * (H * psi)); },
        Vector2c(1, 0), 0.0, 1.0, tol);
    const Vector2c ref = su2_exp(h) * Vector2c(1, 0);
    CHECK((traj.back() - ref).norm() < 1e-9);
    CHECK(std::abs(traj.back().norm() - 1.0) < 1e-9);
}

TEST_CASE("ode respects breakpoints and integrates backwards") {
    using V = Eigen::Matrix<double, 1, 1>;
    ToleranceConfig tol;
    OdeOptions opt;
    opt.breakpoints = {0.5};
    // kinked right-hand side
    auto rhs = [](double t, const V&) { return V(std::abs(t - 0.5)); };
    auto traj = integrate_ode(rhs, V(0.0), 0.0, 1.0, tol, opt);
    CHECK(std::abs(traj.back()(0) - 0.25) < 1e-13);
    auto back = integrate_ode([](double, const V& y) { return V(-y); }, V(std::exp(-1.0)), 1.0, 0.0, tol);
    CHECK(std::abs(back.back()(0) - 1.0) < 1e-9);
}

TEST_CASE("ode reports underflow with the failing time") {
    using V = Eigen::Matrix<double, 1, 1>;
    ToleranceConfig tol;
    auto rhs = [](double t, const V&) { return V(1.0 / (t - 0.3)); };
    try {
        integrate_ode(rhs, V(0.0), 0.0, 1.0, tol);
        FAIL("expected SolverError");
    } catch (const SolverError& e) {
        const std::string msg = e.what();
        const auto at = msg.find("t = ");
        REQUIRE(at != std::string::npos);
        CHECK(std::abs(std::stod(msg.substr(at + 4)) - 0.3) < 1e-6);
    }
}

TEST_CASE("quadrature basics") {
    auto r = quad_semi_infinite([](double w) { return w * std::exp(-w); }, 0.0, 1.0);
    CHECK(std::abs(r.value - 1.0) < 1e-10);
    const double w = 37.0;
    auto c = quad([w](double x) { return std::exp(complex_t(0, w * x)); }, 0.0, 1.0);
    CHECK(std::abs(c.value - (std::exp(complex_t(0, w)) - 1.0) / complex_t(0, w)) < 1e-10);
    CHECK(quad([](double x) { return x; }, 2.0, 0.0).value == doctest::Approx(-2.0).epsilon(1e-14));
}

TEST_CASE("principal values") {
    auto one = [](double) { return 1.0; };
    CHECK(std::abs(quad_pv(one, 0.0, -1.0, 1.0).value) < 1e-12);
    CHECK(std::abs(quad_pv(one, 1.0, 0.0, 2.0).value) < 1e-12);
    CHECK(std::abs(quad_pv(one, 1.0, 0.0, 3.0).value - std::log(2.0)) < 1e-10);
    // PV ∫_0^1 e^x/(x - 1/2): reference from the subtracted form with the log term
    auto g = [](double x) { return std::exp(x) * (1 + x * x); };
    const double c = 0.3;
    const double pv = quad_pv(g, c, -0.5, 2.0).value;
    auto reflected = [&](double x) { return g(2 * c - x); };
    const double pv_ref = quad_pv(reflected, c, 2 * c - 2.0, 2 * c + 0.5).value;
    CHECK(std::abs(pv + pv_ref) < 1e-10);
    CHECK_THROWS_AS(quad_pv(one, 2.0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("gauss-legendre exactness") {
    const auto r = gauss_legendre(8);
    for (int p = 0; p < 16; ++p) {
        double s = 0;
        for (int i = 0; i < 8; ++i) s += r.w[i] * std::pow(r.x[i], p);
        const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
        CHECK(std::abs(s - exact) < 1e-14);
    }
}

TEST_CASE("interpolation tables") {
    std::vector<double> y, d, xs;
    for (int i = 0; i <= 10; ++i) {
        const double x = i / 10.0;
        y.push_back(x * x * x - x);
        d.push_back(3 * x * x - 1);
        xs.push_back(x);
    }
    HermiteTable t(0, 1, y, d);
    CHECK(std::abs(t(0.537) - (std::pow(0.537, 3) - 0.537)) < 1e-14);
    CHECK(std::abs(t.derivative(0.537) - (3 * 0.537 * 0.537 - 1)) < 1e-13);
    std::vector<double> lin;
    for (double x : xs) lin.push_back(2 * x + 1);
    CubicSpline s(xs, lin);
    CHECK(std::abs(s(0.333) - 1.666) < 1e-14);
    CHECK(std::abs(s.derivative(0.71) - 2.0) < 1e-13);
    std::vector<double> cub;
    for (int i = 0; i < 20; ++i) cub.push_back(std::pow(0.1 * i, 3));
    CHECK(std::abs(lagrange4(cub, 0.0, 0.1, 1.234) - std::pow(1.234, 3)) < 1e-13);
}
