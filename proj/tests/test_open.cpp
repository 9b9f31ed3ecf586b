#include <doctest.h>

#include <cmath>

#include "slitqa/open.hpp"
#include "slitqa/schedule_io.hpp"

using namespace slitqa;
using namespace slitqa::open;

namespace {

schedule::AngularSchedule fig3_schedule() {
    schedule::ScheduleSpec ss;
    ss.form = "gaussian2";
    ss.gap.type = "cos2";
    return schedule::build_schedule(ss).schedule;
}

OpenRunSpec fig3_spec(double t_f, double g = 1.0, double T = 20.0) {
    return {closed::ClosedRunSpec{fig3_schedule(), 0.25, t_f}, bath::OhmicBath::from_temperature_mK(2e-4, 4.0, T),
            g};
}

// θ(s) = rate·s on a unit gap
schedule::AngularSchedule frozen(double rate) {
    schedule::AngularSchedule a;
    a.omega = schedule::Curve([](double) { return 1.0; }, [](double) { return 0.0; });
    a.theta = schedule::Curve([=](double s) { return rate * s; }, [=](double) { return rate; });
    a.tau = schedule::Curve([](double s) { return s; }, [](double) { return 1.0; });
    a.tau_f = 1.0;
    return a;
}

double trapezoid_dephasing(const OpenRunSpec& spec, int n) {
    const auto& a = spec.closed.schedule;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double s = static_cast<double>(i) / n;
        const auto r = rwa_rates(spec.bath, a.theta.derivative(s), spec.g, spec.closed.t_f);
        sum += (i == 0 || i == n ? 0.5 : 1.0) * r.gamma_d;
    }
    return spec.g * spec.g * sum / n;
}

} // namespace

TEST_CASE("method names round-trip") {
    for (auto m : {OpenMethod::redfield, OpenMethod::lindblad_rwa, OpenMethod::rwa_closed_form,
                   OpenMethod::semi_empirical})
        CHECK(open_method_from_string(to_string(m)) == m);
    CHECK_THROWS(open_method_from_string("tcl4"));
}

TEST_CASE("decoupled limit reduces to the closed system") {
    for (double t_f : {20.0, 75.0, 160.0}) {
        auto spec = fig3_spec(t_f, 0.0);
        const double exact = closed::solve_exact(spec.closed).p00;
        CHECK(std::abs(solve_redfield(spec).p_ground - exact) < 1e-4);
        CHECK(std::abs(solve_lindblad_rwa(spec).p_ground - exact) < 1e-4);
        const auto cf = rwa_closed_form(spec);
        CHECK(std::abs(std::abs(cf.rho_pm) - 0.5) < 1e-14);
        CHECK(std::abs(cf.p_ground - exact) < 1e-6);
        CHECK(average_dephasing_rate(spec.closed.schedule, spec.bath, 0.0, t_f) == 0.0);
    }
    CHECK_THROWS(solve_redfield(fig3_spec(10.0, -1.0)));
    CHECK_THROWS(solve_lindblad_rwa(fig3_spec(0.0)));
}

TEST_CASE("master equations conserve trace, Hermiticity and positivity") {
    for (double t_f : {30.0, 104.0, 250.0}) {
        auto spec = fig3_spec(t_f);
        const auto red = solve_redfield(spec);
        CHECK(red.trace_error <= 1e-8);
        CHECK(red.hermiticity_error <= 1e-8);
        CHECK(red.tcl2.ratio == doctest::Approx(2e-4 * t_f / spec.bath.beta()));
        for (auto basis : {LindbladBasis::propagated, LindbladBasis::instantaneous}) {
            LindbladOptions opt;
            opt.basis = basis;
            const auto lin = solve_lindblad_rwa(spec, opt);
            CHECK(lin.trace_error <= 1e-8);
            CHECK(lin.hermiticity_error <= 1e-8);
            CHECK(lin.min_eigenvalue >= -1e-8);
            CHECK(lin.p_ground > 0.5);
        }
    }
}

TEST_CASE("trajectory carries a unitary frame") {
    LindbladOptions opt;
    opt.samples = 17;
    opt.keep_trajectory = true;
    const auto r = solve_lindblad_rwa(fig3_spec(60.0), opt);
    REQUIRE(r.trajectory.size() == 17);
    for (const auto& st : r.trajectory) {
        CHECK((st.U_I.adjoint() * st.U_I - Matrix2c::Identity()).norm() < 1e-8);
        CHECK(std::abs(st.rho.trace() - 1.0) < 1e-8);
    }
    CHECK(r.trajectory.back().s == 1.0);
}

TEST_CASE("frozen schedule relaxes to detailed balance") {
    // With θ̇ constant the RWA generator has the Gibbs state of ±Δ/2 as its fixed point.
    const double Delta = 1.0, t_f = 200.0;
    OpenRunSpec spec{closed::ClosedRunSpec{frozen(Delta * t_f), 1e-9, t_f},
                     bath::OhmicBath::from_temperature_mK(1e-2, 4.0, 20.0), 1.0};
    for (auto basis : {LindbladBasis::propagated, LindbladBasis::instantaneous}) {
        LindbladOptions opt;
        opt.basis = basis;
        const auto r = solve_lindblad_rwa(spec, opt);
        const double pp = 0.5 * (r.rho_final.sum()).real();                                   // ⟨+|ρ|+⟩
        const double mm = 0.5 * (r.rho_final(0, 0) + r.rho_final(1, 1) - r.rho_final(0, 1) - r.rho_final(1, 0)).real();
        CHECK(std::abs(pp / mm - std::exp(-spec.bath.beta() * Delta)) < 1e-4);
    }
}

TEST_CASE("RWA rates") {
    const auto b = bath::OhmicBath::from_temperature_mK(2e-4, 4.0, 20.0);
    for (double th : {-300.0, -2.0, 0.0, 0.7, 40.0, 900.0}) {
        const auto r = rwa_rates(b, th, 1.3, 100.0);
        CHECK(r.Delta == th / 100.0);
        CHECK(r.gamma_d / r.gamma_t == doctest::Approx(0.5 * (1 + std::exp(-b.beta() * r.Delta))).epsilon(1e-14));
        CHECK(r.lamb_splitting ==
              doctest::Approx(1.69 * 100.0 * (b.lamb_shift(r.Delta) - b.lamb_shift(-r.Delta))).epsilon(1e-14));
    }
    CHECK(rwa_rates(b, 0.0, 1.0, 10.0).lamb_splitting == 0.0);
}

TEST_CASE("average dephasing rate") {
    auto spec = fig3_spec(120.0);
    const double q = average_dephasing_rate(spec.closed.schedule, spec.bath, 1.0, 120.0);
    CHECK(std::abs(q / trapezoid_dephasing(spec, 10000) - 1.0) < 1e-6);
    // doubling g quadruples the rate
    CHECK(average_dephasing_rate(spec.closed.schedule, spec.bath, 2.0, 120.0) == doctest::Approx(4 * q));
    const double rate = 30.0, t_f = 50.0;
    const auto a = frozen(rate);
    const auto r = rwa_rates(spec.bath, rate, 0.8, t_f);
    CHECK(average_dephasing_rate(a, spec.bath, 0.8, t_f) == doctest::Approx(0.64 * r.gamma_d).epsilon(1e-12));
}

TEST_CASE("closed-form ground probability matches the direct sum") {
    for (double t_f : {40.0, 104.0, 333.0}) {
        const auto cf = rwa_closed_form(fig3_spec(t_f));
        CHECK((cf.U_a.adjoint() * cf.U_a - Matrix2c::Identity()).norm() < 1e-8);
        CHECK(ground_probability_from_pm(1.0 - cf.rho_mm, cf.rho_mm, cf.rho_pm, cf.U_a) ==
              doctest::Approx(cf.p_ground).epsilon(1e-8));  // H13 uses unitarity of U^a
        CHECK(cf.rho_mm >= 0.5);
        CHECK(cf.rho_mm < 1.0);
        CHECK(std::abs(cf.rho_pm) <= 0.5);
    }
}

TEST_CASE("closed form without Lamb shift") {
    ClosedFormOptions nl;
    nl.lamb_shift = false;
    for (double t_f : {15.0, 104.0, 277.0}) {
        auto spec = fig3_spec(t_f);
        const auto cf = rwa_closed_form(spec, nl);
        const double D = average_dephasing_rate(spec.closed.schedule, spec.bath, 1.0, t_f) * t_f;
        CHECK(2 * cf.rho_pm.real() == doctest::Approx(std::exp(-D)).epsilon(1e-14));
        CHECK(cf.rho_pm.imag() == 0.0);

        nl.population_term = false;
        const auto weak = rwa_closed_form(spec, nl);
        nl.population_term = true;
        SemiEmpiricalParams params;
        params.gamma_bar_d = D / t_f;
        CHECK(std::abs(weak.p_ground - semi_empirical(weak.p_closed, params, t_f)) < 1e-10);
        CHECK(std::abs(weak.p_closed - closed::solve_exact(spec.closed).p00) < 1e-6);
    }
}

TEST_CASE("semi-empirical limits") {
    CHECK(equilibrium_ground_probability(0.0, 0.25) == 0.5);
    CHECK(equilibrium_ground_probability(1e6, 0.25) == doctest::Approx(1.0).epsilon(1e-15));
    SemiEmpiricalParams p;
    p.gamma_bar_d = 0.01;
    CHECK(semi_empirical(0.9, p, 0.0) == doctest::Approx(0.9));
    CHECK(semi_empirical(0.9, p, 1e5) == doctest::Approx(0.5).epsilon(1e-12));
    p.beta_eff = 0.3;
    p.P_E = equilibrium_ground_probability(p.beta_eff, 0.25);
    CHECK(semi_empirical(0.2, p, 1e5) == doctest::Approx(p.P_E).epsilon(1e-12));
    CHECK(p.P_E > 0.5);
}

TEST_CASE("dispatch") {
    auto spec = fig3_spec(80.0);
    spec.method = OpenMethod::semi_empirical;
    const auto se = solve_open(spec);
    const double D = average_dephasing_rate(spec.closed.schedule, spec.bath, 1.0, 80.0) * 80.0;
    CHECK(se.p_ground ==
          doctest::Approx(0.5 + (closed::solve_exact(spec.closed).p00 - 0.5) * std::exp(-D)).epsilon(1e-12));
    spec.method = OpenMethod::rwa_closed_form;
    const auto cf = solve_open(spec);
    CHECK(cf.p_ground == rwa_closed_form(spec).p_ground);
    CHECK(cf.rho_final(1, 1).real() == rwa_closed_form(spec).rho_mm);
    spec.method = OpenMethod::lindblad_rwa;
    CHECK(solve_open(spec).p_ground == solve_lindblad_rwa(spec).p_ground);
}

TEST_CASE("Redfield grid convergence") {
    auto spec = fig3_spec(104.0);
    RedfieldOptions coarse;
    coarse.grid = 2048;
    const double fine = solve_redfield(spec).p_ground;
    CHECK(std::abs(solve_redfield(spec, coarse).p_ground - fine) < 1e-4);
    coarse.grid = 8;
    CHECK_THROWS(solve_redfield(spec, coarse));
}

TEST_CASE("effective temperature fit recovers its generator") {
    const double E0 = 0.25, T = 37.0, beta = bath::hbar_over_kB / T;
    std::vector<SweepPoint> sweep;
    for (int i = 0; i < 40; ++i) {
        SweepPoint p;
        p.t_f = 5.0 + 10.0 * i;
        p.p_closed = 0.5 + 0.45 * std::cos(2 * pi * p.t_f / 99.5) * std::cos(2 * pi * p.t_f / 99.5);
        p.gamma_bar_d = 2e-3 * (1.0 + 0.3 * std::sin(0.01 * p.t_f));
        SemiEmpiricalParams params{p.gamma_bar_d, equilibrium_ground_probability(beta, E0), beta};
        p.p_open = semi_empirical(p.p_closed, params, p.t_f);
        sweep.push_back(p);
    }
    const auto fit = fit_effective_temperature(sweep, E0, 99.5);
    CHECK(fit.converged);
    CHECK(std::abs(fit.beta_eff / beta - 1.0) < 1e-6);
    CHECK(fit.residual < 1e-9);
    CHECK(fit.residual_curve.size() == sweep.size());

    CHECK_THROWS_AS(fit_effective_temperature({sweep.begin(), sweep.begin() + 9}, E0, 10.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(fit_effective_temperature({sweep.begin(), sweep.begin() + 12}, E0, 200.0),
                    std::invalid_argument);
}
