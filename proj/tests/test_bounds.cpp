#include <doctest.h>

#include <cmath>

#include "slitqa/bounds.hpp"
#include "slitqa/numerics/quadrature.hpp"

using namespace slitqa;
using namespace slitqa::bounds;

namespace {

// |F − I| for the normalized pulse √(α²/π)e^{−α²(τ−μ)²} on [0, τ_f] at frequency ω
double measured_truncation(double alpha, double mu, double tau_f, double omega) {
    QuadOptions opt;
    opt.abs_tol = 1e-15;
    opt.rel_tol = 1e-13;
    opt.max_intervals = 100000;
    const double norm = alpha / std::sqrt(pi);
    auto re = [&](double t) { return norm * std::exp(-alpha * alpha * (t - mu) * (t - mu)) * std::cos(omega * t); };
    auto im = [&](double t) { return -norm * std::exp(-alpha * alpha * (t - mu) * (t - mu)) * std::sin(omega * t); };
    const complex_t I(quad(re, 0.0, tau_f, opt, {mu}).value, quad(im, 0.0, tau_f, opt, {mu}).value);
    const complex_t F = std::exp(complex_t(0.0, -omega * mu)) * std::exp(-omega * omega / (4 * alpha * alpha));
    return std::abs(F - I);
}

} // namespace

TEST_CASE("Fourier extension bound values") {
    const double sp = std::sqrt(pi);
    auto r = fourier_extension_bound(1.0, sp);
    CHECK(r.value == doctest::Approx(std::exp(-pi) / pi).epsilon(1e-14));
    CHECK(r.value <= 0.014);
    CHECK(r.pass());
    auto r2 = fourier_extension_bound(2.0, sp);
    CHECK(r2.value == doctest::Approx(std::exp(-4 * pi) / (2 * pi)).epsilon(1e-14));
    CHECK(r2.value < 6e-7);
    CHECK(fourier_extension_bound(1.0, 40.0).value < 1e-300);
    CHECK_FALSE(fourier_extension_bound(1.0, 1.0).pass());
    CHECK_THROWS(fourier_extension_bound(0.0, 1.0));
    double prev = INFINITY;
    for (double x = 0.25; x < 6.0; x += 0.25) {
        const double v = fourier_extension_bound(1.0, x).value;
        CHECK(v < prev);
        CHECK(v >= 0.0);
        prev = v;
    }
}

TEST_CASE("Fourier extension bound is sound") {
    const double tau_f = 1.0;
    for (double alpha : {8.0, 12.0, 16.0, 24.0, 32.0}) {
        for (double mu : {0.25, 0.3, 0.4, 0.5, 0.65}) {
            const double ts = std::min(mu, tau_f - mu);
            const double bound = fourier_extension_bound(alpha, ts).value;
            const double mass = fourier_truncation_mass(alpha, mu, tau_f);
            CHECK(mass <= bound);
            for (double omega : {0.0, 3.0, 25.0, 80.0}) CHECK(measured_truncation(alpha, mu, tau_f, omega) <= mass + 1e-14);
        }
    }
}

TEST_CASE("K2 extension bound") {
    CHECK(k2_extension_bound(1.0, 2.0).value == doctest::Approx(std::exp(-4.0)).epsilon(1e-15));
    CHECK(k2_extension_bound(2.0, 1.0).value == doctest::Approx(0.0183156388887342).epsilon(1e-12));
    CHECK(k2_extension_bound(0.0, 1.0).value == 1.0);
    CHECK_FALSE(k2_extension_bound(0.0, 1.0).pass());
    CHECK(k2_extension_bound(2.0, 1.0).pass());
    CHECK(k2_extension_bound(3.0, 1.0).value < k2_extension_bound(2.0, 1.0).value);
}

TEST_CASE("Magnus convergence check") {
    CHECK(magnus_convergence_check(pi / 4).pass());
    CHECK(magnus_convergence_check(0.0).pass());
    CHECK(magnus_convergence_check(magnus_xi).pass());
    CHECK_FALSE(magnus_convergence_check(1.2).pass());
    CHECK(magnus_convergence_check(1.2).status == BoundStatus::warn);
    CHECK_THROWS(magnus_convergence_check(-0.1));
}

TEST_CASE("TCL2 bound report") {
    const auto b = bath::OhmicBath::from_temperature_mK(2e-4, 4.0, 20.0);
    const auto r = tcl2_bound_report(b, 1.0, 400.0);
    CHECK(r.value == doctest::Approx(2e-4 * 400.0 / b.beta()));
    CHECK(r.threshold == 0.2);
    CHECK(tcl2_bound_report(b, 0.0, 400.0).value == 0.0);
    CHECK(tcl2_bound_report(b, 1.0, 200.0).value == doctest::Approx(r.value / 2));
    // the stated 0.16 is met at t_f = 0.16 β/(g²η)
    CHECK(tcl2_bound_report(b, 1.0, 0.16 * b.beta() / 2e-4, 0.16).value == doctest::Approx(0.16));
}

TEST_CASE("Gaussian progression bounds and JSON") {
    const auto g = schedule::GaussianProgression::two_step(32.0, 101.0 / 800.0, 1.0);
    const auto reps = gaussian_bounds(g);
    REQUIRE(reps.size() == 2);
    CHECK(reps[0].name == "fourier_extension");
    CHECK(reps[0].value == fourier_extension_bound(32.0, g.tau_star()).value);
    const auto j = to_json(reps[1]);
    CHECK(j["name"] == "k2_extension");
    CHECK(j["status"] == "pass");
    CHECK(j["inputs"]["alpha"] == 32.0);
}
