#pragma once

#include <string>
#include <utility>
#include <vector>

#include "slitqa/numerics/ode.hpp"
#include "slitqa/numerics/pauli.hpp"
#include "slitqa/schedule.hpp"

namespace slitqa::closed {

enum class FrequencyConvention { angular, ordinary };

struct ClosedRunSpec {
    schedule::AngularSchedule schedule;
    double E0{0.25};   // energy scale; rad/ns under the angular convention
    double t_f{0.0};   // ns
    FrequencyConvention convention{FrequencyConvention::angular};

    double angular_E0() const { return convention == FrequencyConvention::angular ? E0 : 2 * pi * E0; }
    /// Dimensionless phase rate ω = E0 t_f of the adiabatic frame.
    double omega() const { return angular_E0() * t_f; }
    void validate() const;
};

struct ClosedResult {
    double p00{0.0};
    Vector2c final_state{Vector2c::Zero()};
    std::string method;
    double norm_error{0.0};
    std::vector<std::string> warnings;
};

struct MagnusTerms {
    complex_t phi{};
    double K2_z{0.0};
    double eta{0.0};
    Eigen::Vector3d n_hat{0.0, 0.0, 1.0};
    int order{1};
};

/// Radius inside which the Magnus series is guaranteed to converge.
inline constexpr double magnus_radius = 1.08686870;

/// Ground state cos(θ/2)|0⟩ + i sin(θ/2)|1⟩ of −(cos θ Z + sin θ Y).
Vector2c ground_state(double theta);

/// Schrödinger equation on the τ clock, lab frame, from the initial ground state.
ClosedResult solve_exact(const ClosedRunSpec& spec, const ToleranceConfig& tol = {});

/// φ = ½ ∫_0^{τ_f} (dθ/dτ) e^{−iωτ} dτ.
complex_t phi_integral(const schedule::Progression& prog, double omega, const ToleranceConfig& tol = {});
/// Same integral on the s clock: ½ ∫_0^1 θ′(s) e^{−iωτ(s)} ds.
complex_t phi_integral(const schedule::AngularSchedule& a, double omega, const ToleranceConfig& tol = {});
/// Full-line Gaussian-train value (ψ/2K) e^{−(ω/2α)²} Σ_k e^{−iωτ_k}.
complex_t phi_gaussian_closed_form(const schedule::GaussianProgression& g, double omega);
/// Landau-Zener estimate ½∫_0^1 e^{−iωτ_f s}/(s² + (1−s)²) ds for the linear schedule.
complex_t phi_linear_approx(double omega, double tau_f, const ToleranceConfig& tol = {});

double magnus1_p00(complex_t phi);
/// Damped oscillation cos²[(π/4) e^{−(t_f/t_ad)²} cos(π t_f/t_coh)] of the two-step Gaussian.
double two_step_p00(double t_f, double t_ad, double t_coh);

/// Z coefficient of K₂ = −∫∫_{τ2<τ1} λ1 λ2 sin(ω(τ1−τ2)) Z with λ = ½ dθ/dτ,
/// by composite Gauss-Legendre on the time-ordered triangle.
double k2_triangle(const schedule::Progression& prog, double omega, double tol = 1e-12);
/// Single full-line Gaussian of total angle ψ: −ψ²/(4√π) D(√2 r), r = ω/(2α).
double k2_single_gaussian(double psi, double alpha, double omega);

MagnusTerms magnus_terms(complex_t phi, double k2_z, int order);
Unitary2 magnus_propagator(const MagnusTerms& m);

ClosedResult magnus1(const ClosedRunSpec& spec, const ToleranceConfig& tol = {});
ClosedResult magnus2_p00(const ClosedRunSpec& spec, const ToleranceConfig& tol = {});

/// ξ = E0 t_f ∫_{s−}^{s+} Ω(s) ds.
double accumulated_phase(const schedule::AngularSchedule& a, double s_minus, double s_plus, double E0,
                         double t_f, const ToleranceConfig& tol = {});
/// s with τ(s) = target, by bisection to 1e-10.
double locate_tau(const schedule::AngularSchedule& a, double target);

struct InterferometerSpec {
    double t_ad{0.0};        // ns, 2α/E0
    double t_coh{0.0};       // ns, π/(μE0)
    double xi_rate{0.0};     // ξ / t_f in rad/ns
    double gamma_deph{0.0};  // per unit τ
    double delta_tau{0.0};   // τ+ − τ−
    double s_minus{0.0}, s_plus{0.0};

    double xi(double t_f) const { return xi_rate * t_f; }
};

InterferometerSpec make_interferometer(const schedule::GaussianProgression& g,
                                       const schedule::AngularSchedule& a, double E0_angular,
                                       double gamma_deph, const ToleranceConfig& tol = {});
double interferometer_p00(const InterferometerSpec& ispec, double t_f);

/// ⟨0|ρ|1⟩ for ρ expressed in the basis {cos θ|0⟩ + e^{iφ} sin θ|1⟩, sin θ|0⟩ − e^{iφ} cos θ|1⟩}.
complex_t computational_coherence(const Density2& rho_energy, double theta, double phi_angle);

/// Propagator U_I(s) of H_I = ½θ′(s) X_I(s) in the adiabatic interaction frame.
struct InteractionFrame {
    OdeTrajectory<Matrix2c> U;
    double omega{0.0};
    Matrix2c at(double s) const { return s >= 1.0 ? U.back() : U(s); }
};
InteractionFrame interaction_propagator(const ClosedRunSpec& spec, const ToleranceConfig& tol = {});

/// Pulse centers mapped to the s clock, used as integration breakpoints.
std::vector<double> schedule_breakpoints(const schedule::AngularSchedule& a);

} // namespace slitqa::closed
