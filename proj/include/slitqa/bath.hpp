#pragma once

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "slitqa/numerics/types.hpp"
#include "slitqa/schedule.hpp"

namespace slitqa::bath {

/// ħ/k_B in ns·mK, so that β[ns] = hbar_over_kB / T[mK].
inline constexpr double hbar_over_kB = 7.638232577;

struct BathTimescales {
    double tau_B{0.0};   // β/2π
    double tau_M{0.0};   // √(2β/ω_c)
    double tau_tr{0.0};  // β ln(βω_c)
    /// The transition time is only meaningful for βω_c > 1.
    bool transition_defined{false};
};

/// Ohmic bath J(ω) = ηω e^{−ω/ω_c} at inverse temperature β.
/// Units: ω in rad/ns, β in ns, η in ns². Immutable; the S(ω) table is built on construction.
class OhmicBath {
public:
    OhmicBath(double eta, double omega_c, double beta);
    static OhmicBath from_temperature_mK(double eta, double omega_c, double temperature_mK);

    double eta() const { return eta_; }
    double omega_c() const { return omega_c_; }
    double beta() const { return beta_; }
    double temperature_mK() const { return hbar_over_kB / beta_; }

    double spectral_density(double omega) const;
    /// γ(ω) = 2πJ(ω)/(1 − e^{−βω}), continued to ω < 0 through the same expression.
    double gamma(double omega) const;
    /// S(ω) from the tabulated principal value, falling back to lamb_shift_direct off-table.
    double lamb_shift(double omega) const;
    /// S(ω) = (1/2π) PV∫ γ(ω′)/(ω − ω′) dω′ over |ω′| ≤ 40ω_c.
    double lamb_shift_direct(double omega) const;
    /// C(t) from the Bose image series with an Euler-Maclaurin tail.
    complex_t correlation(double t) const;
    /// C(t) by direct quadrature of the defining frequency integral.
    complex_t correlation_quadrature(double t) const;

    BathTimescales timescales() const;
    /// Half-width of the ω′ window used for principal values.
    double cutoff_window() const { return 40.0 * omega_c_; }
    /// Half-width of the tabulated S(ω) range.
    double table_range() const { return table_range_; }

private:
    double singular_part(double omega) const;
    double eta_, omega_c_, beta_;
    double table_range_{64.0};
    std::shared_ptr<const std::vector<double>> s_table_;  // S on a uniform grid
    double table_h_{0.0};
};

double spectral_density(const OhmicBath& b, double omega);
double gamma_rate(const OhmicBath& b, double omega);
double lamb_shift_S(const OhmicBath& b, double omega);
complex_t correlation_function(const OhmicBath& b, double t);
BathTimescales timescales(const OhmicBath& b);

/// Element-wise γ over an Eigen array expression.
template <typename Derived>
Eigen::ArrayXd gamma_rate(const OhmicBath& b, const Eigen::ArrayBase<Derived>& omega) {
    return omega.derived().unaryExpr([&b](double w) { return b.gamma(w); }).eval();
}

/// γ and S as callables bound to one bath.
struct SpectralPair {
    std::function<double(double)> gamma;
    std::function<double(double)> S;
};
SpectralPair spectral_pair(const OhmicBath& b);

struct Tcl2Validity {
    double ratio{0.0};  // g²ηt_f/β
    double threshold{0.2};
    bool pass{true};
};
Tcl2Validity tcl2_validity(const OhmicBath& b, double g, double t_f, double threshold = 0.2);

struct RwaValidity {
    double inverse_tau_B{0.0};     // rad/ns
    double min_separation{0.0};    // min_s |θ̇(s)|/t_f, rad/ns
    double fail_fraction{0.0};     // share of s samples with |θ̇|/t_f < 1/τ_B
    bool pass{true};
};
RwaValidity rwa_validity(const OhmicBath& b, const schedule::AngularSchedule& a, double t_f,
                         std::size_t samples = 2001);

} // namespace slitqa::bath
