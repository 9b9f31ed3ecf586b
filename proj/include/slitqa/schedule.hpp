#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "slitqa/numerics/types.hpp"

namespace slitqa::schedule {

/// Scalar function on [0, 1] with an optional analytic derivative.
class Curve {
public:
    using Fn = std::function<double(double)>;

    Curve() = default;
    explicit Curve(Fn f, Fn df = {}) : f_(std::move(f)), df_(std::move(df)) {}

    double operator()(double s) const { return f_(s); }
    /// Analytic derivative when provided, otherwise 4th-order finite differences (h = 1e-5),
    /// one-sided inside 2h of the unit interval's ends.
    double derivative(double s) const;
    bool has_analytic_derivative() const { return static_cast<bool>(df_); }
    explicit operator bool() const { return static_cast<bool>(f_); }

    static Curve constant(double v);
    /// Natural cubic spline through tabulated samples.
    static Curve tabulated(std::vector<double> s, std::vector<double> y);
    /// Cubic Hermite table on a uniform grid over [0, 1].
    static Curve hermite(std::vector<double> y, std::vector<double> dy);

private:
    Fn f_, df_;
};

/// Transverse and longitudinal field schedules A(s), B(s).
struct CartesianSchedule {
    Curve A, B;
};

/// dθ/dτ on the cumulative-gap clock τ ∈ [0, τ_f].
struct Progression {
    std::function<double(double)> rate;
    std::function<double(double)> angle;  // θ(τ); empty means integrate `rate`
    double tau_f{1.0};
    std::vector<double> breakpoints;      // features worth splitting quadratures at

    double angle_at(double tau, double tol = 1e-12) const;
};

enum class Normalization {
    full_line,       // c fixed by the full-line Gaussian integral (c = α√π/4 for two pulses)
    finite_interval  // c fixed by the integral over [0, τ_f]
};

/// Train of Gaussian pulses c Σ_k exp(−α²(τ − τ_f/2 − offset_k)²).
struct GaussianProgression {
    double alpha{32.0};
    std::vector<double> offsets{-101.0 / 800.0, 101.0 / 800.0};
    double total_angle{pi / 2};
    double tau_f{1.0};
    Normalization normalization{Normalization::full_line};

    static GaussianProgression two_step(double alpha, double mu, double tau_f);
    static GaussianProgression single(double alpha, double tau_f, double offset = 0.0);

    double amplitude() const;
    double center(std::size_t k) const { return 0.5 * tau_f + offsets.at(k); }
    /// Smallest distance from a pulse center to either end of [0, τ_f].
    double tau_star() const;
    /// Containment quality α τ*.
    double containment() const { return alpha * tau_star(); }
    double rate(double tau) const;
    double angle(double tau) const;
    std::vector<std::string> warnings() const;
    void validate() const;
};

Progression gaussian_progression_fn(const GaussianProgression& g);

/// Dimensionless gap Ω(s).
struct GapProfile {
    std::string name;
    Curve omega;

    static GapProfile constant(double value = 1.0);
    /// Ω(s) = depth·cos²(cycles·π·s) + floor; defaults give the two-crossing profile.
    static GapProfile two_crossing(double depth = 0.99, double floor = 0.01, double cycles = 2.0);
    static GapProfile tabulated(std::vector<double> s, std::vector<double> omega);
    /// Throws std::invalid_argument unless 0 < Ω ≤ 1 on a uniform sample of [0, 1].
    void validate(std::size_t samples = 2049) const;
};

struct AngularSchedule {
    Curve omega;   // Ω(s)
    Curve theta;   // θ(s), unwrapped
    Curve tau;     // τ(s) = ∫_0^s Ω
    double tau_f{1.0};
    std::shared_ptr<const Progression> progression;  // set when built from a τ-clock progression
    std::vector<std::string> warnings;
};

struct CumulativeGap {
    Curve tau;
    double tau_f{0.0};
};

/// τ(s) by integrating dτ/ds = Ω, tabulated on a 2048-interval Hermite grid.
CumulativeGap cumulative_gap(const Curve& omega, const ToleranceConfig& tol = {});
CumulativeGap cumulative_gap(const AngularSchedule& a, const ToleranceConfig& tol = {});

/// Raised when Ω vanishes.
class GapClosureError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

CartesianSchedule linear_schedule();
AngularSchedule angular_from_cartesian(const CartesianSchedule& c, const ToleranceConfig& tol = {});
CartesianSchedule cartesian_from_angular(const AngularSchedule& a);
/// dθ/dτ = (B′A − A′B)/Ω³ as a function of s.
std::function<double(double)> progression_from_schedule(const CartesianSchedule& c);

struct SynthesisReport {
    double theta_end{0.0};
    double deviation{0.0};  // θ(1) − total angle
};

/// Integrates dτ/ds = Ω, dθ/ds = Ω·prog(τ) from θ(0) = 0.
AngularSchedule synthesize_schedule(const GapProfile& gap, const Progression& prog,
                                    SynthesisReport* report = nullptr,
                                    const ToleranceConfig& tol = {}, double target_angle = pi / 2);

/// The schedule on the τ clock: the stored progression when present, otherwise
/// θ(τ) = θ(s(τ)) by inverting τ(s).
Progression tau_view(const AngularSchedule& a);

/// s with τ(s) = target, by safeguarded Newton iteration.
double invert_tau(const AngularSchedule& a, double target);

} // namespace slitqa::schedule
