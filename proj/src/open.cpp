#include "slitqa/open.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

#include "slitqa/numerics/interp.hpp"
#include "slitqa/numerics/ode.hpp"
#include "slitqa/numerics/quadrature.hpp"

namespace slitqa::open {

using schedule::AngularSchedule;

namespace {

constexpr complex_t I1{0.0, 1.0};
constexpr double max_step_fraction = 1.0 / 256.0;
constexpr double drift_warn = 1e-6;

Matrix2c h_interaction(const AngularSchedule& a, double omega, double s) {
    const double half_rate = 0.5 * a.theta.derivative(s);
    const complex_t e = std::exp(-I1 * (omega * a.tau(s)));
    Matrix2c h;
    h << 0.0, half_rate * e, half_rate * std::conj(e), 0.0;
    return h;
}

/// μ⃗·σ⃗ = U0†(cos θ Y + sin θ Z)U0 with ϕ = −ωτ.
Matrix2c coupling_operator(const AngularSchedule& a, double omega, double s) {
    const double th = a.theta(s);
    const double phi = -omega * a.tau(s);
    const double ct = std::cos(th);
    return std::sin(phi) * ct * pauli::X() + std::cos(phi) * ct * pauli::Y() + std::sin(th) * pauli::Z();
}

/// U0†(s)|±⟩ as columns (+, −).
Matrix2c eigenbasis(double omega_tau) {
    const complex_t e = std::exp(-0.5 * I1 * omega_tau);
    const double r = 1.0 / std::sqrt(2.0);
    Matrix2c v;
    v << r * e, r * e, r * std::conj(e), -r * std::conj(e);
    return v;
}

Matrix2c U0_dagger(double omega_tau) {
    const complex_t e = std::exp(-0.5 * I1 * omega_tau);
    Matrix2c u = Matrix2c::Zero();
    u(0, 0) = e;
    u(1, 1) = std::conj(e);
    return u;
}

Matrix2c comm(const Matrix2c& x, const Matrix2c& y) { return x * y - y * x; }

void record(OpenResult& r, const Density2& rho) {
    const auto d = density_diagnostics(rho);
    r.trace_error = std::max(r.trace_error, d.trace_error);
    r.hermiticity_error = std::max(r.hermiticity_error, d.hermiticity_error);
    r.min_eigenvalue = std::min(r.min_eigenvalue, d.min_eigenvalue);
}

void finish(OpenResult& r) {
    if (r.trace_error > drift_warn) r.warnings.push_back("trace drift above 1e-6");
    if (r.hermiticity_error > drift_warn) r.warnings.push_back("hermiticity drift above 1e-6");
    if (r.min_eigenvalue < -drift_warn) r.warnings.push_back("negative eigenvalue below -1e-6");
    if (!r.tcl2.pass) r.warnings.push_back("TCL2 validity ratio above threshold");
}

double sample_point(std::size_t i, std::size_t n) {
    return n < 2 ? 1.0 : static_cast<double>(i) / static_cast<double>(n - 1);
}

} // namespace

std::string to_string(OpenMethod m) {
    switch (m) {
    case OpenMethod::redfield: return "redfield";
    case OpenMethod::lindblad_rwa: return "lindblad_rwa";
    case OpenMethod::rwa_closed_form: return "rwa_closed_form";
    case OpenMethod::semi_empirical: return "semi_empirical";
    }
    return "unknown";
}

OpenMethod open_method_from_string(const std::string& name) {
    if (name == "redfield") return OpenMethod::redfield;
    if (name == "lindblad_rwa") return OpenMethod::lindblad_rwa;
    if (name == "rwa_closed_form") return OpenMethod::rwa_closed_form;
    if (name == "semi_empirical") return OpenMethod::semi_empirical;
    throw std::invalid_argument("unknown open-system method '" + name + "'");
}

void OpenRunSpec::validate() const {
    closed.validate();
    if (!(closed.t_f > 0.0)) throw std::invalid_argument("open-system runs need t_f > 0");
    if (!(g >= 0.0) || !std::isfinite(g)) throw std::invalid_argument("coupling g must be >= 0");
}

RwaRates rwa_rates(const bath::OhmicBath& b, double theta_dot, double g, double t_f) {
    RwaRates r;
    r.Delta = theta_dot / t_f;
    r.gamma_t = b.gamma(r.Delta);
    r.gamma_d = 0.5 * r.gamma_t * (1.0 + std::exp(-b.beta() * r.Delta));
    r.lamb_splitting = g * g * t_f * (b.lamb_shift(r.Delta) - b.lamb_shift(-r.Delta));
    return r;
}

OpenResult solve_redfield(const OpenRunSpec& spec, const RedfieldOptions& opt, const ToleranceConfig& tol) {
    spec.validate();
    if (opt.grid < 16) throw std::invalid_argument("Redfield grid needs at least 16 intervals");
    const AngularSchedule& a = spec.closed.schedule;
    const double t_f = spec.closed.t_f;
    const double omega = spec.closed.omega();
    const auto frame = closed::interaction_propagator(spec.closed, tol);

    auto M_tilde = [&](double s) {
        const Matrix2c U = frame.at(s);
        return Matrix2c(U.adjoint() * coupling_operator(a, omega, s) * U);
    };

    const std::size_t N = opt.grid;
    const double h = 1.0 / static_cast<double>(N);
    std::vector<Matrix2c> M(N + 1);
    for (std::size_t k = 0; k <= N; ++k) M[k] = M_tilde(static_cast<double>(k) * h);

    // Hat-function product weights of C(t_f u): a_k from [u_k, u_{k+1}], b_k from [u_{k−1}, u_k].
    const GaussRule gl = gauss_legendre(8);
    std::vector<complex_t> wa(N + 1, 0.0), wb(N + 1, 0.0);
    for (std::size_t k = 0; k <= N; ++k) {
        const double u0 = static_cast<double>(k) * h;
        const int panels = k < 4 ? 64 : (k < 64 ? 8 : 1);
        const double ph = h / panels;
        complex_t left{}, right{};
        for (int p = 0; p < panels; ++p) {
            const double pa = u0 + p * ph;
            for (std::size_t q = 0; q < gl.x.size(); ++q) {
                const double u = pa + 0.5 * ph * (gl.x[q] + 1.0);
                const complex_t c = spec.bath.correlation(t_f * u) * (0.5 * ph * gl.w[q]);
                const double frac = (u - u0) / h;
                left += c * (1.0 - frac);
                right += c * frac;
            }
        }
        wa[k] = left;
        if (k + 1 <= N) wb[k + 1] = right;
    }
    std::vector<complex_t> c(N + 1);
    for (std::size_t k = 0; k <= N; ++k) c[k] = wa[k] + wb[k];

    // Λ̃_n = Σ_{k<n} c_k M_{n−k} + b_n M_0, by FFT convolution per matrix entry.
    std::size_t L = 1;
    while (L < 2 * (N + 1)) L <<= 1;
    Eigen::FFT<double> fft;
    std::vector<complex_t> cpad(L, 0.0), cf, x(L), xf, conv;
    std::copy(c.begin(), c.end(), cpad.begin());
    fft.fwd(cf, cpad);
    std::vector<Matrix2c> Lam(N + 1, Matrix2c::Zero());
    const double kappa2 = spec.g * spec.g * t_f * t_f;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            std::fill(x.begin(), x.end(), complex_t{});
            for (std::size_t k = 0; k <= N; ++k) x[k] = M[k](i, j);
            fft.fwd(xf, x);
            for (std::size_t k = 0; k < L; ++k) xf[k] *= cf[k];
            fft.inv(conv, xf);
            for (std::size_t n = 0; n <= N; ++n)
                Lam[n](i, j) = kappa2 * (conv[n] - wa[n] * M[0](i, j));
        }
    }
    Lam[0].setZero();

    auto rhs = [&](double s, const Matrix2c& rho) {
        const Matrix2c Mt = M_tilde(s);
        const Matrix2c Lt = lagrange4(Lam, 0.0, h, s);
        return Matrix2c(-(comm(Mt, Lt * rho) + comm(rho * Lt.adjoint(), Mt)));
    };
    Matrix2c rho0 = Matrix2c::Zero();
    rho0(0, 0) = 1.0;
    OdeOptions oo;
    oo.breakpoints = closed::schedule_breakpoints(a);
    oo.max_step = max_step_fraction;
    const auto traj = integrate_ode(rhs, rho0, 0.0, 1.0, tol, oo);

    OpenResult r;
    r.method = "redfield";
    r.tcl2 = bath::tcl2_validity(spec.bath, spec.g, t_f);
    for (std::size_t i = 0; i < opt.samples; ++i) {
        const double s = sample_point(i, opt.samples);
        const Matrix2c rt = s >= 1.0 ? traj.back() : traj(s);
        record(r, rt);
        if (opt.keep_trajectory) {
            const Matrix2c U = frame.at(s);
            r.trajectory.push_back({s, U * rt * U.adjoint(), U});
        }
    }
    const Matrix2c U1 = frame.U.back();
    r.rho_final = U1 * traj.back() * U1.adjoint();
    record(r, r.rho_final);
    r.p_ground = r.rho_final(0, 0).real();
    finish(r);
    return r;
}

OpenResult solve_lindblad_rwa(const OpenRunSpec& spec, const LindbladOptions& opt,
                              const ToleranceConfig& tol) {
    spec.validate();
    const AngularSchedule& a = spec.closed.schedule;
    const double t_f = spec.closed.t_f;
    const double omega = spec.closed.omega();
    const double g2tf = spec.g * spec.g * t_f;
    const auto& b = spec.bath;

    using State = Eigen::Matrix<complex_t, 2, 4>;  // [U_I | ρ]
    auto rhs = [&](double s, const State& y) {
        const Matrix2c U = y.leftCols<2>();
        const Matrix2c rho = y.rightCols<2>();
        const Matrix2c H = h_interaction(a, omega, s);
        const Matrix2c eig = eigenbasis(omega * a.tau(s));
        const Matrix2c basis = opt.basis == LindbladBasis::propagated ? Matrix2c(U * eig) : eig;
        const Vector2c vb = basis.col(0), va = basis.col(1);  // b ↔ ε₊, a ↔ ε₋
        const double Delta = a.theta.derivative(s) / t_f;
        const double r_down = g2tf * b.gamma(Delta);   // ε₊ → ε₋
        const double r_up = g2tf * b.gamma(-Delta);    // ε₋ → ε₊
        const Matrix2c Pa = va * va.adjoint(), Pb = vb * vb.adjoint();
        const Matrix2c Lab = va * vb.adjoint();
        const Matrix2c H_LS = g2tf * (b.lamb_shift(Delta) * Pb + b.lamb_shift(-Delta) * Pa);
        Matrix2c d = -I1 * comm(H + H_LS, rho);
        d += r_down * (Lab * rho * Lab.adjoint() - 0.5 * (Pb * rho + rho * Pb));
        d += r_up * (Lab.adjoint() * rho * Lab - 0.5 * (Pa * rho + rho * Pa));
        State out;
        out.leftCols<2>() = -I1 * (H * U);
        out.rightCols<2>() = d;
        return out;
    };
    State y0 = State::Zero();
    y0(0, 0) = 1.0;
    y0(1, 1) = 1.0;
    y0(0, 2) = 1.0;
    OdeOptions oo;
    oo.breakpoints = closed::schedule_breakpoints(a);
    oo.max_step = max_step_fraction;
    const auto traj = integrate_ode(rhs, y0, 0.0, 1.0, tol, oo);

    OpenResult r;
    r.method = "lindblad_rwa";
    r.tcl2 = bath::tcl2_validity(b, spec.g, t_f);
    for (std::size_t i = 0; i < opt.samples; ++i) {
        const double s = sample_point(i, opt.samples);
        const State y = s >= 1.0 ? traj.back() : traj(s);
        record(r, y.rightCols<2>());
        if (opt.keep_trajectory) r.trajectory.push_back({s, y.rightCols<2>(), y.leftCols<2>()});
    }
    r.rho_final = traj.back().rightCols<2>();
    record(r, r.rho_final);
    r.p_ground = r.rho_final(0, 0).real();
    if (r.min_eigenvalue < -drift_warn) {
        char msg[160];
        std::snprintf(msg, sizeof msg, "lindblad_rwa: positivity lost (min eigenvalue %.3g) at t_f = %.6g",
                      r.min_eigenvalue, t_f);
        throw SolverError(msg);
    }
    finish(r);
    return r;
}

double ground_probability_from_pm(double rho_pp, double rho_mm, complex_t rho_pm, const Unitary2& U_a) {
    const double r = 1.0 / std::sqrt(2.0);
    const complex_t chi_p = r * (U_a(0, 0) + U_a(0, 1));  // ⟨0|χ₊⟩
    const complex_t chi_m = r * (U_a(0, 0) - U_a(0, 1));  // ⟨0|χ₋⟩
    const complex_t p = rho_pp * std::norm(chi_p) + rho_mm * std::norm(chi_m) +
                        rho_pm * chi_p * std::conj(chi_m) + std::conj(rho_pm) * chi_m * std::conj(chi_p);
    return p.real();
}

double average_dephasing_rate(const AngularSchedule& a, const bath::OhmicBath& b, double g, double t_f,
                              double quad_tol) {
    if (g == 0.0 || b.eta() == 0.0) return 0.0;
    if (!(t_f > 0.0)) throw std::invalid_argument("average_dephasing_rate: t_f must be > 0");
    QuadOptions opt;
    opt.abs_tol = 1e-300;
    opt.rel_tol = quad_tol;
    opt.max_intervals = 100000;
    auto f = [&](double s) {
        const double Delta = a.theta.derivative(s) / t_f;
        return 0.5 * b.gamma(Delta) * (1.0 + std::exp(-b.beta() * Delta));
    };
    return g * g * quad(f, 0.0, 1.0, opt, closed::schedule_breakpoints(a)).value;
}

ClosedFormResult rwa_closed_form(const OpenRunSpec& spec, const ClosedFormOptions& opt,
                                 const ToleranceConfig& tol) {
    spec.validate();
    const AngularSchedule& a = spec.closed.schedule;
    const double t_f = spec.closed.t_f;
    const double g2tf = spec.g * spec.g * t_f;
    const auto& b = spec.bath;

    // y = (G, ∫F₊e^G, ∫Ω_LS) with G = 2g²t_f∫γ_d
    auto rhs = [&](double s, const Eigen::Vector3d& y) {
        const RwaRates r = rwa_rates(b, a.theta.derivative(s), spec.g, t_f);
        Eigen::Vector3d d;
        d(0) = 2 * g2tf * r.gamma_d;
        d(1) = g2tf * r.gamma_t * std::exp(y(0));
        d(2) = opt.lamb_shift ? r.lamb_splitting : 0.0;
        return d;
    };
    OdeOptions oo;
    oo.dense = false;
    oo.breakpoints = closed::schedule_breakpoints(a);
    oo.max_step = max_step_fraction;
    const Eigen::Vector3d y = integrate_ode(rhs, Eigen::Vector3d::Zero().eval(), 0.0, 1.0, tol, oo).back();

    ClosedFormResult res;
    res.dephasing_integral = average_dephasing_rate(a, b, spec.g, t_f, tol.quad_tol) * t_f;
    res.rho_mm = std::exp(-y(0)) * (0.5 + y(1));
    res.rho_pm = 0.5 * std::exp(-I1 * y(2) - res.dephasing_integral);

    const auto frame = closed::interaction_propagator(spec.closed, tol);
    const double omega_tau_f = spec.closed.omega() * a.tau_f;
    res.U_a = frame.U.back() * U0_dagger(omega_tau_f);
    res.p_closed = std::norm(res.U_a(0, 0));

    const double rho_pp = 1.0 - res.rho_mm;
    const complex_t w = res.U_a(0, 0) * std::conj(res.U_a(0, 1));
    double p = 0.5 + 2 * res.rho_pm.real() * (res.p_closed - 0.5) + 2 * res.rho_pm.imag() * w.imag();
    if (opt.population_term) p += (rho_pp - res.rho_mm) * w.real();
    res.p_ground = p;
    return res;
}

double equilibrium_ground_probability(double beta, double E0) { return 1.0 / (1.0 + std::exp(-beta * E0)); }

double semi_empirical(double p_closed, const SemiEmpiricalParams& params, double t_f) {
    return (p_closed - 0.5) * std::exp(-params.gamma_bar_d * t_f) + params.P_E;
}

namespace {

// Brent's minimisation on [lo, hi] (golden section with parabolic steps).
template <typename F>
std::pair<double, bool> brent_minimize(F&& f, double lo, double hi, double xtol, int max_iter = 200) {
    const double golden = 0.3819660112501051;
    double x = lo + golden * (hi - lo), w = x, v = x;
    double fx = f(x), fw = fx, fv = fx;
    double d = 0.0, e = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        const double m = 0.5 * (lo + hi);
        const double tol1 = xtol * std::abs(x) + 1e-14, tol2 = 2 * tol1;
        if (std::abs(x - m) <= tol2 - 0.5 * (hi - lo)) return {x, true};
        bool parabolic = false;
        if (std::abs(e) > tol1) {
            const double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2 * (q - r);
            if (q > 0) p = -p;
            q = std::abs(q);
            if (std::abs(p) < std::abs(0.5 * q * e) && p > q * (lo - x) && p < q * (hi - x)) {
                e = d;
                d = p / q;
                const double u = x + d;
                if (u - lo < tol2 || hi - u < tol2) d = x < m ? tol1 : -tol1;
                parabolic = true;
            }
        }
        if (!parabolic) {
            e = (x < m ? hi : lo) - x;
            d = golden * e;
        }
        const double u = std::abs(d) >= tol1 ? x + d : x + (d > 0 ? tol1 : -tol1);
        const double fu = f(u);
        if (fu <= fx) {
            (u < x ? hi : lo) = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            (u < x ? lo : hi) = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    return {x, false};
}

} // namespace

TemperatureFit fit_effective_temperature(const std::vector<SweepPoint>& sweep, double E0, double t_coh,
                                         double T_lo, double T_hi) {
    if (sweep.size() < 10) throw std::invalid_argument("fit_effective_temperature: need at least 10 points");
    double tmin = sweep.front().t_f, tmax = tmin;
    for (const auto& p : sweep) {
        tmin = std::min(tmin, p.t_f);
        tmax = std::max(tmax, p.t_f);
    }
    if (tmax - tmin < t_coh)
        throw std::invalid_argument("fit_effective_temperature: sweep must span at least one t_coh");
    if (!(T_lo > 0.0 && T_hi > T_lo)) throw std::invalid_argument("fit_effective_temperature: bad bracket");

    auto residuals = [&](double T) {
        SemiEmpiricalParams params;
        params.beta_eff = bath::hbar_over_kB / T;
        params.P_E = equilibrium_ground_probability(params.beta_eff, E0);
        std::vector<double> r;
        r.reserve(sweep.size());
        for (const auto& p : sweep) {
            params.gamma_bar_d = p.gamma_bar_d;
            r.push_back(p.p_open - semi_empirical(p.p_closed, params, p.t_f));
        }
        return r;
    };
    auto cost = [&](double logT) {
        double s = 0.0;
        for (double x : residuals(std::exp(logT))) s += x * x;
        return s;
    };
    const auto [logT, ok] = brent_minimize(cost, std::log(T_lo), std::log(T_hi), 1e-12);
    TemperatureFit fit;
    fit.T_star_mK = std::exp(logT);
    fit.beta_eff = bath::hbar_over_kB / fit.T_star_mK;
    fit.residual_curve = residuals(fit.T_star_mK);
    double ss = 0.0;
    for (double x : fit.residual_curve) ss += x * x;
    fit.residual = std::sqrt(ss / static_cast<double>(sweep.size()));
    const double edge = 1e-6;
    fit.converged = ok && logT > std::log(T_lo) + edge && logT < std::log(T_hi) - edge;
    return fit;
}

OpenResult solve_open(const OpenRunSpec& spec, const ToleranceConfig& tol) {
    switch (spec.method) {
    case OpenMethod::redfield: return solve_redfield(spec, {}, tol);
    case OpenMethod::lindblad_rwa: return solve_lindblad_rwa(spec, {}, tol);
    case OpenMethod::rwa_closed_form: {
        const auto cf = rwa_closed_form(spec, {}, tol);
        OpenResult r;
        r.method = "rwa_closed_form";
        r.p_ground = cf.p_ground;
        r.tcl2 = bath::tcl2_validity(spec.bath, spec.g, spec.closed.t_f);
        r.rho_final(0, 0) = 1.0 - cf.rho_mm;  // {+, −} basis
        r.rho_final(1, 1) = cf.rho_mm;
        r.rho_final(0, 1) = cf.rho_pm;
        r.rho_final(1, 0) = std::conj(cf.rho_pm);
        record(r, r.rho_final);
        finish(r);
        return r;
    }
    case OpenMethod::semi_empirical: {
        spec.validate();
        OpenResult r;
        r.method = "semi_empirical";
        r.tcl2 = bath::tcl2_validity(spec.bath, spec.g, spec.closed.t_f);
        SemiEmpiricalParams params;
        params.gamma_bar_d =
            average_dephasing_rate(spec.closed.schedule, spec.bath, spec.g, spec.closed.t_f, tol.quad_tol);
        const double pg = closed::solve_exact(spec.closed, tol).p00;
        r.p_ground = semi_empirical(pg, params, spec.closed.t_f);
        r.rho_final(0, 0) = r.p_ground;
        r.rho_final(1, 1) = 1.0 - r.p_ground;
        record(r, r.rho_final);
        finish(r);
        return r;
    }
    }
    throw std::invalid_argument("solve_open: unknown method");
}

} // namespace slitqa::open
