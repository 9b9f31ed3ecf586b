#include "slitqa/closed.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "slitqa/numerics/quadrature.hpp"
#include "slitqa/numerics/special.hpp"

namespace slitqa::closed {

using schedule::AngularSchedule;
using schedule::Progression;

namespace {

constexpr complex_t I1{0.0, 1.0};
constexpr double max_step_fraction = 1.0 / 256.0;

QuadOptions quad_options(const ToleranceConfig& tol) {
    QuadOptions o;
    o.abs_tol = tol.quad_tol;
    return o;
}

// −∫_0^X dx1 w(x1) ∫_0^{x1} dx2 w(x2) sin(p(x1) − p(x2)) on n uniform panels of q-point
// Gauss-Legendre. Whole panels below the outer node enter through running cos/sin sums;
// the panel containing the outer node gets its own mapped rule.
template <typename W, typename P>
double triangle_sum(const W& w, const P& p, double X, int panels, const GaussRule& rule) {
    const int q = static_cast<int>(rule.x.size());
    const double h = X / panels;
    double total = 0.0, cum_c = 0.0, cum_s = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double a = k * h;
        double panel_c = 0.0, panel_s = 0.0, outer = 0.0;
        for (int i = 0; i < q; ++i) {
            const double x1 = a + 0.5 * h * (rule.x[i] + 1.0);
            const double wx1 = 0.5 * h * rule.w[i] * w(x1);
            const double p1 = p(x1);
            // partial panel [a, x1]
            double partial = 0.0;
            const double len = x1 - a;
            for (int j = 0; j < q; ++j) {
                const double x2 = a + 0.5 * len * (rule.x[j] + 1.0);
                partial += 0.5 * len * rule.w[j] * w(x2) * std::sin(p1 - p(x2));
            }
            const double whole = std::sin(p1) * cum_c - std::cos(p1) * cum_s;
            outer += wx1 * (whole + partial);
            panel_c += wx1 * std::cos(p1);
            panel_s += wx1 * std::sin(p1);
        }
        total += outer;
        cum_c += panel_c;
        cum_s += panel_s;
    }
    return -total;
}

template <typename W, typename P>
double triangle_adaptive(const W& w, const P& p, double X, double tol) {
    const GaussRule rule = gauss_legendre(8);
    int panels = 32;
    double prev = triangle_sum(w, p, X, panels, rule);
    for (int level = 0; level < 12; ++level) {
        panels *= 2;
        const double next = triangle_sum(w, p, X, panels, rule);
        if (std::abs(next - prev) <= tol * std::max(1.0, std::abs(next))) return next;
        prev = next;
    }
    throw SolverError("k2_triangle: panel refinement did not converge");
}

bool uses_tau_clock(const AngularSchedule& a) { return static_cast<bool>(a.progression); }

} // namespace

void ClosedRunSpec::validate() const {
    if (!(E0 > 0.0) || !std::isfinite(E0)) throw std::invalid_argument("E0 must be positive");
    if (!(t_f >= 0.0) || !std::isfinite(t_f)) throw std::invalid_argument("t_f must be non-negative");
    if (!schedule.omega || !schedule.theta || !schedule.tau)
        throw std::invalid_argument("schedule is incomplete");
}

Vector2c ground_state(double theta) {
    return Vector2c(std::cos(0.5 * theta), I1 * std::sin(0.5 * theta));
}

std::vector<double> schedule_breakpoints(const AngularSchedule& a) {
    std::vector<double> out;
    if (!a.progression) return out;
    for (double tau : a.progression->breakpoints) out.push_back(schedule::invert_tau(a, tau));
    return out;
}

ClosedResult solve_exact(const ClosedRunSpec& spec, const ToleranceConfig& tol) {
    spec.validate();
    const Progression view = schedule::tau_view(spec.schedule);
    const double omega = spec.omega();
    const double theta0 = view.angle_at(0.0);
    const double theta1 = view.angle_at(view.tau_f);
    const Vector2c psi0 = ground_state(theta0);

    Vector2c psi = psi0;
    if (omega > 0.0) {
        auto rhs = [&](double tau, const Vector2c& y) {
            const double th = view.angle(tau);
            const double c = std::cos(th), s = std::sin(th);
            // (cos θ Z + sin θ Y) y
            const Vector2c hy(c * y(0) - I1 * s * y(1), I1 * s * y(0) - c * y(1));
            return Vector2c(I1 * (0.5 * omega) * hy);
        };
        OdeOptions opt;
        opt.dense = false;
        opt.breakpoints = view.breakpoints;
        opt.max_step = view.tau_f * max_step_fraction;
        psi = integrate_ode(rhs, psi0, 0.0, view.tau_f, tol, opt).back();
    }
    ClosedResult r;
    r.method = "exact";
    r.final_state = psi;
    r.norm_error = std::abs(psi.squaredNorm() - 1.0);
    r.p00 = std::norm(ground_state(theta1).dot(psi));
    return r;
}

complex_t phi_integral(const Progression& prog, double omega, const ToleranceConfig& tol) {
    auto f = [&](double tau) { return 0.5 * prog.rate(tau) * std::exp(-I1 * (omega * tau)); };
    return quad(f, 0.0, prog.tau_f, quad_options(tol), prog.breakpoints).value;
}

complex_t phi_integral(const AngularSchedule& a, double omega, const ToleranceConfig& tol) {
    if (uses_tau_clock(a)) return phi_integral(*a.progression, omega, tol);
    auto f = [&](double s) { return 0.5 * a.theta.derivative(s) * std::exp(-I1 * (omega * a.tau(s))); };
    return quad(f, 0.0, 1.0, quad_options(tol)).value;
}

complex_t phi_gaussian_closed_form(const schedule::GaussianProgression& g, double omega) {
    const double r = omega / (2 * g.alpha);
    complex_t sum = 0.0;
    for (std::size_t k = 0; k < g.offsets.size(); ++k) sum += std::exp(-I1 * (omega * g.center(k)));
    return g.total_angle / (2.0 * static_cast<double>(g.offsets.size())) * std::exp(-r * r) * sum;
}

complex_t phi_linear_approx(double omega, double tau_f, const ToleranceConfig& tol) {
    auto f = [&](double s) {
        return 0.5 * std::exp(-I1 * (omega * tau_f * s)) / (s * s + (1 - s) * (1 - s));
    };
    return quad(f, 0.0, 1.0, quad_options(tol)).value;
}

double magnus1_p00(complex_t phi) {
    const double c = std::cos(std::abs(phi));
    return c * c;
}

double two_step_p00(double t_f, double t_ad, double t_coh) {
    const double x = t_f / t_ad;
    const double c = std::cos(0.25 * pi * std::exp(-x * x) * std::cos(pi * t_f / t_coh));
    return c * c;
}

double k2_triangle(const Progression& prog, double omega, double tol) {
    auto w = [&](double tau) { return 0.5 * prog.rate(tau); };
    auto p = [&](double tau) { return omega * tau; };
    return triangle_adaptive(w, p, prog.tau_f, tol);
}

double k2_single_gaussian(double psi, double alpha, double omega) {
    const double r = omega / (2 * alpha);
    return -psi * psi / (4 * std::sqrt(pi)) * dawson(std::sqrt(2.0) * r);
}

MagnusTerms magnus_terms(complex_t phi, double k2_z, int order) {
    if (order != 1 && order != 2) throw std::invalid_argument("magnus order must be 1 or 2");
    MagnusTerms m;
    m.phi = phi;
    m.order = order;
    m.K2_z = order == 2 ? k2_z : 0.0;
    const Eigen::Vector3d k(phi.real(), -phi.imag(), m.K2_z);
    m.eta = k.norm();
    if (m.eta > 0.0) m.n_hat = k / m.eta;
    return m;
}

Unitary2 magnus_propagator(const MagnusTerms& m) {
    return su2_exp(PauliVectord::from_real(0.0, m.eta * m.n_hat));
}

ClosedResult magnus1(const ClosedRunSpec& spec, const ToleranceConfig& tol) {
    spec.validate();
    const complex_t phi = phi_integral(spec.schedule, spec.omega(), tol);
    const Unitary2 u = magnus_propagator(magnus_terms(phi, 0.0, 1));
    ClosedResult r;
    r.method = "magnus1";
    r.final_state = u.col(0);
    r.p00 = magnus1_p00(phi);
    r.norm_error = std::abs(r.final_state.squaredNorm() - 1.0);
    return r;
}

ClosedResult magnus2_p00(const ClosedRunSpec& spec, const ToleranceConfig& tol) {
    spec.validate();
    const AngularSchedule& a = spec.schedule;
    const double omega = spec.omega();
    const complex_t phi = phi_integral(a, omega, tol);
    double k2;
    if (uses_tau_clock(a)) {
        k2 = k2_triangle(*a.progression, omega);
    } else {
        auto w = [&](double s) { return 0.5 * a.theta.derivative(s); };
        auto p = [&](double s) { return omega * a.tau(s); };
        k2 = triangle_adaptive(w, p, 1.0, 1e-12);
    }
    const MagnusTerms m = magnus_terms(phi, k2, 2);
    const Unitary2 u = magnus_propagator(m);
    ClosedResult r;
    r.method = "magnus2";
    r.final_state = u.col(0);
    r.p00 = std::norm(u(0, 0));
    r.norm_error = std::abs(r.final_state.squaredNorm() - 1.0);
    if (std::abs(phi) >= magnus_radius) {
        std::ostringstream os;
        os << "magnus2: |phi| = " << std::abs(phi) << " exceeds the convergence radius " << magnus_radius;
        r.warnings.push_back(os.str());
    }
    return r;
}

double accumulated_phase(const AngularSchedule& a, double s_minus, double s_plus, double E0, double t_f,
                         const ToleranceConfig& tol) {
    if (s_minus == s_plus) return 0.0;
    return E0 * t_f * quad([&](double s) { return a.omega(s); }, s_minus, s_plus, quad_options(tol)).value;
}

double locate_tau(const AngularSchedule& a, double target) {
    double lo = 0.0, hi = 1.0;
    if (target <= 0.0) return 0.0;
    if (target >= a.tau_f) return 1.0;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (a.tau(mid) < target) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

InterferometerSpec make_interferometer(const schedule::GaussianProgression& g, const AngularSchedule& a,
                                       double E0_angular, double gamma_deph, const ToleranceConfig& tol) {
    if (g.offsets.size() != 2) throw std::invalid_argument("interferometer needs a two-pulse progression");
    const double mu = 0.5 * std::abs(g.offsets[1] - g.offsets[0]);
    if (!(mu > 0.0)) throw std::invalid_argument("interferometer needs separated pulses (mu > 0)");
    InterferometerSpec s;
    s.t_ad = 2 * g.alpha / E0_angular;
    s.t_coh = pi / (mu * E0_angular);
    s.gamma_deph = gamma_deph;
    s.delta_tau = 2 * mu;
    s.s_minus = locate_tau(a, 0.5 * g.tau_f - mu);
    s.s_plus = locate_tau(a, 0.5 * g.tau_f + mu);
    s.xi_rate = accumulated_phase(a, s.s_minus, s.s_plus, E0_angular, 1.0, tol);
    return s;
}

double interferometer_p00(const InterferometerSpec& is, double t_f) {
    const double x = t_f / is.t_ad;
    const double phi = 0.125 * pi * std::exp(-x * x);
    const double s2 = std::sin(phi) * std::sin(phi), c2 = std::cos(phi) * std::cos(phi);
    return s2 * s2 + c2 * c2 - 2 * std::exp(-is.gamma_deph * is.delta_tau) * s2 * c2 * std::cos(is.xi(t_f));
}

complex_t computational_coherence(const Density2& rho, double theta, double phi_angle) {
    const double re10 = rho(1, 0).real(), im10 = rho(1, 0).imag();
    const double d = rho(0, 0).real() - 0.5;
    const double C = std::hypot(re10, d);
    const double varphi = std::atan2(re10, d);
    return std::exp(-I1 * phi_angle) * (C * std::sin(2 * theta - varphi) + I1 * im10);
}

InteractionFrame interaction_propagator(const ClosedRunSpec& spec, const ToleranceConfig& tol) {
    spec.validate();
    const AngularSchedule& a = spec.schedule;
    const double omega = spec.omega();
    auto rhs = [&](double s, const Matrix2c& u) {
        const double half_rate = 0.5 * a.theta.derivative(s);
        const complex_t e = std::exp(-I1 * (omega * a.tau(s)));
        Matrix2c h;
        h << 0.0, half_rate * e, half_rate * std::conj(e), 0.0;
        return Matrix2c(-I1 * (h * u));
    };
    OdeOptions opt;
    opt.breakpoints = schedule_breakpoints(a);
    opt.max_step = max_step_fraction;
    InteractionFrame f{integrate_ode(rhs, Matrix2c(Matrix2c::Identity()), 0.0, 1.0, tol, opt), omega};
    return f;
}

} // namespace slitqa::closed
