#pragma once

#include <string>
#include <vector>

#include "slitqa/bath.hpp"
#include "slitqa/closed.hpp"
#include "slitqa/numerics/pauli.hpp"

namespace slitqa::open {

enum class OpenMethod { redfield, lindblad_rwa, rwa_closed_form, semi_empirical };

std::string to_string(OpenMethod m);
OpenMethod open_method_from_string(const std::string& name);

struct OpenRunSpec {
    closed::ClosedRunSpec closed;
    bath::OhmicBath bath;
    double g{1.0};  // rad/ns
    OpenMethod method{OpenMethod::lindblad_rwa};

    void validate() const;
};

/// Density matrix in the adiabatic interaction frame together with U_I(s).
struct AdiabaticFrameState {
    double s{0.0};
    Density2 rho{Density2::Zero()};
    Unitary2 U_I{Unitary2::Identity()};
};

struct RedfieldOptions {
    std::size_t grid{4096};      // uniform s intervals for the memory kernel
    std::size_t samples{256};    // diagnostic samples along the trajectory
    bool keep_trajectory{false};
};

struct OpenResult {
    double p_ground{0.0};
    Density2 rho_final{Density2::Zero()};  // adiabatic frame
    std::string method;
    double trace_error{0.0};        // max over sampled s
    double hermiticity_error{0.0};  // max over sampled s
    double min_eigenvalue{1.0};     // min over sampled s
    bath::Tcl2Validity tcl2;
    std::vector<std::string> warnings;
    std::vector<AdiabaticFrameState> trajectory;
};

/// Rates entering the RWA master equation at one s.
struct RwaRates {
    double Delta{0.0};           // θ̇/t_f, rad/ns
    double gamma_t{0.0};         // γ(Δ)
    double gamma_d{0.0};         // ½γ(Δ)(1 + e^{−βΔ})
    double lamb_splitting{0.0};  // g²t_f (S(Δ) − S(−Δ))
};
RwaRates rwa_rates(const bath::OhmicBath& b, double theta_dot, double g, double t_f);

/// Redfield (TCL2) equation in the adiabatic frame with the full memory integral.
OpenResult solve_redfield(const OpenRunSpec& spec, const RedfieldOptions& opt = {},
                          const ToleranceConfig& tol = {});

enum class LindbladBasis {
    propagated,    // |a⟩ = U_I U0†|−⟩, |b⟩ = U_I U0†|+⟩
    instantaneous  // |a⟩ = U0†|−⟩, |b⟩ = U0†|+⟩, eigenvectors of H_I(s) in the frame of ρ
};

struct LindbladOptions {
    LindbladBasis basis{LindbladBasis::propagated};
    std::size_t samples{256};
    bool keep_trajectory{false};
};

/// Lindblad equation under the RWA; relaxation runs from |b⟩ (ε₊) to |a⟩ (ε₋) at g²t_f γ(Δ).
OpenResult solve_lindblad_rwa(const OpenRunSpec& spec, const LindbladOptions& opt = {},
                              const ToleranceConfig& tol = {});

struct ClosedFormOptions {
    bool lamb_shift{true};
    /// Drop the (ρ₊₊ − ρ₋₋) Re(U00 U01*) term, the weak-coupling step towards the semi-empirical formula.
    bool population_term{true};
};

struct ClosedFormResult {
    double p_ground{0.0};
    double p_closed{0.0};           // |U^a_00|² of the closed evolution
    double rho_mm{0.5};             // ρ₋₋(1)
    complex_t rho_pm{0.5};          // ρ₊₋(1)
    double dephasing_integral{0.0}; // g² t_f ∫ γ_d ds
    Unitary2 U_a{Unitary2::Identity()};
};

/// Exponential-integral solution of the RWA equation mapped back to P′_G.
ClosedFormResult rwa_closed_form(const OpenRunSpec& spec, const ClosedFormOptions& opt = {},
                                 const ToleranceConfig& tol = {});

/// P′ = Σ ρ_ij ⟨0|χ_i⟩⟨χ_j|0⟩ with χ_i = U^a|i⟩ and i ∈ {+, −}.
double ground_probability_from_pm(double rho_pp, double rho_mm, complex_t rho_pm, const Unitary2& U_a);

/// γ̄_d = g² ∫_0^1 γ_d(s) ds (rad/ns); depends on t_f through Δ = θ̇/t_f.
double average_dephasing_rate(const schedule::AngularSchedule& a, const bath::OhmicBath& b, double g,
                              double t_f, double quad_tol = 1e-8);

/// Thermal ground probability 1/(1 + e^{−βE0}) of the final Hamiltonian.
double equilibrium_ground_probability(double beta, double E0);

struct SemiEmpiricalParams {
    double gamma_bar_d{0.0};  // rad/ns
    double P_E{0.5};
    double beta_eff{0.0};     // ns; 0 means infinite temperature
};

double semi_empirical(double p_closed, const SemiEmpiricalParams& params, double t_f);

/// One point of a master-equation sweep, with the matching closed-system value and γ̄_d.
struct SweepPoint {
    double t_f{0.0};
    double p_open{0.0};
    double p_closed{0.0};
    double gamma_bar_d{0.0};
};

struct TemperatureFit {
    double T_star_mK{0.0};
    double beta_eff{0.0};
    double residual{0.0};  // root mean square
    bool converged{false};
    std::vector<double> residual_curve;  // p_open − model at the fitted T*, per point
};

/// Least-squares fit of the semi-empirical P_E(β) over T* ∈ [T_lo, T_hi] mK by Brent's method.
/// Throws std::invalid_argument for fewer than 10 points or a t_f span shorter than t_coh.
TemperatureFit fit_effective_temperature(const std::vector<SweepPoint>& sweep, double E0, double t_coh,
                                         double T_lo = 1.0, double T_hi = 1000.0);

/// Dispatch on spec.method. semi_empirical uses P_E(0) = ½.
OpenResult solve_open(const OpenRunSpec& spec, const ToleranceConfig& tol = {});

} // namespace slitqa::open
