#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "slitqa/bath.hpp"
#include "slitqa/schedule.hpp"

namespace slitqa::bounds {

enum class BoundStatus { pass, warn };

/// An analytic error bound or validity certificate evaluated at concrete inputs.
struct BoundReport {
    std::string name;
    double value{0.0};      // bound magnitude, ≥ 0
    double threshold{0.0};  // pass iff value ≤ threshold
    std::vector<std::pair<std::string, double>> inputs;
    BoundStatus status{BoundStatus::pass};

    bool pass() const { return status == BoundStatus::pass; }
};

std::string to_string(BoundStatus s);
nlohmann::json to_json(const BoundReport& r);

/// |F − I| for a normalized Gaussian pulse cut to [0, τ_f]: ½[erfc(αμ) + erfc(α(τ_f − μ))].
double fourier_truncation_mass(double alpha, double mu, double tau_f);

/// ε ≤ (1/√π) e^{−(ατ*)²}/(ατ*) for replacing the finite window by the full line.
BoundReport fourier_extension_bound(double alpha, double tau_star, double threshold = 0.014);

/// ε₂ ≤ e^{−(ατ*)²}, the Gaussian mass outside the inscribed disc, for the K₂ extension.
BoundReport k2_extension_bound(double alpha, double tau_star, double threshold = 0.0183156388887342);

/// Convergence radius of the Magnus series.
inline constexpr double magnus_xi = 1.08686870;

/// Sufficient condition |φ| ≤ ξ for Magnus convergence.
BoundReport magnus_convergence_check(double phi_norm);

/// g²ηt_f/β against the TCL2 threshold.
BoundReport tcl2_bound_report(const bath::OhmicBath& b, double g, double t_f, double threshold = 0.2);

/// Fourier and K₂ extension bounds for a Gaussian progression, using its α and τ*.
std::vector<BoundReport> gaussian_bounds(const schedule::GaussianProgression& g);

} // namespace slitqa::bounds
