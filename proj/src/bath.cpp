#include "slitqa/bath.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "slitqa/numerics/interp.hpp"
#include "slitqa/numerics/quadrature.hpp"

namespace slitqa::bath {

namespace {

constexpr int image_terms = 32;
constexpr std::size_t table_intervals = 4096;

} // namespace

OhmicBath::OhmicBath(double eta, double omega_c, double beta)
    : eta_(eta), omega_c_(omega_c), beta_(beta) {
    if (!(eta >= 0.0) || !std::isfinite(eta)) throw std::invalid_argument("OhmicBath: eta must be >= 0");
    if (!(omega_c > 0.0) || !std::isfinite(omega_c))
        throw std::invalid_argument("OhmicBath: omega_c must be > 0");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("OhmicBath: beta must be > 0");

    table_range_ = std::min(64.0, 0.5 * cutoff_window());
    table_h_ = 2 * table_range_ / table_intervals;
    std::vector<double> s(table_intervals + 1, 0.0);
    if (eta_ > 0.0) {
        for (std::size_t i = 0; i <= table_intervals; ++i) {
            const double w = -table_range_ + table_h_ * static_cast<double>(i);
            s[i] = lamb_shift_direct(w) - singular_part(w);
        }
    }
    s_table_ = std::make_shared<const std::vector<double>>(std::move(s));
}

OhmicBath OhmicBath::from_temperature_mK(double eta, double omega_c, double temperature_mK) {
    if (!(temperature_mK > 0.0)) throw std::invalid_argument("OhmicBath: temperature must be > 0");
    return OhmicBath(eta, omega_c, hbar_over_kB / temperature_mK);
}

double OhmicBath::spectral_density(double omega) const {
    if (omega < 0.0) throw std::domain_error("spectral_density: defined for omega >= 0 only");
    return eta_ * omega * std::exp(-omega / omega_c_);
}

double OhmicBath::gamma(double omega) const {
    if (omega == 0.0) return 2 * pi * eta_ / beta_;
    // ω/(1 − e^{−βω}) is positive for either sign; expm1 keeps it accurate near 0.
    return 2 * pi * eta_ * std::exp(-std::abs(omega) / omega_c_) * omega / -std::expm1(-beta_ * omega);
}

double OhmicBath::lamb_shift_direct(double omega) const {
    if (eta_ == 0.0) return 0.0;
    const double W = cutoff_window();
    const double scale = eta_ * std::max(omega_c_, 1.0 / beta_);
    QuadOptions opt;
    opt.abs_tol = 1e-11 * scale;
    opt.max_intervals = 200000;
    auto g = [this](double w) { return gamma(w); };
    double pv;
    if (omega > -W && omega < W) {
        pv = quad_pv(g, omega, -W, W, opt, {0.0}).value;  // PV∫γ/(ω′ − ω)
    } else {
        pv = quad([&](double w) { return g(w) / (w - omega); }, -W, W, opt, {0.0}).value;
    }
    return -pv / (2 * pi);
}

double OhmicBath::singular_part(double omega) const {
    // The kink of e^{−|ω|/ω_c} at 0 makes S carry ω^k ln|ω| terms; with
    // 2πηω/(1 − e^{−βω}) = p0 + p1 ω + p2 ω² + ..., the odd-in-|ω| part of γ is
    // c1|ω| + c2 ω|ω| + c3|ω|³ and each transforms to (c_k/π) ω^k ln|ω|.
    if (omega == 0.0) return 0.0;
    const double p0 = 2 * pi * eta_ / beta_, p1 = pi * eta_, p2 = pi * eta_ * beta_ / 6;
    const double wc = omega_c_;
    const double c1 = -p0 / wc, c2 = -p1 / wc, c3 = -p0 / (6 * wc * wc * wc) - p2 / wc;
    const double L = std::log(std::abs(omega));
    return (c1 + omega * (c2 + omega * c3)) * omega * L / pi;
}

double OhmicBath::lamb_shift(double omega) const {
    if (eta_ == 0.0) return 0.0;
    if (std::abs(omega) > table_range_) return lamb_shift_direct(omega);
    return lagrange4(*s_table_, -table_range_, table_h_, omega) + singular_part(omega);
}

complex_t OhmicBath::correlation(double t) const {
    // coth(βω/2) = 1 + 2Σ e^{−nβω} turns each term into ∫ω e^{−aω}e^{iωt}dω = (a − it)^{−2}.
    const double a0 = 1.0 / omega_c_;
    auto inv2 = [t](double a) {
        const complex_t r = 1.0 / complex_t(a, -t);
        return (r * r).real();
    };
    double re = inv2(a0);
    for (int n = 1; n < image_terms; ++n) re += 2 * inv2(a0 + n * beta_);
    // Euler-Maclaurin tail of 2Σ_{n≥N} f(a_N + (n−N)β) with f(a) = Re (a − it)^{−2}
    const complex_t r = 1.0 / complex_t(a0 + image_terms * beta_, -t);
    const complex_t r2 = r * r, r3 = r2 * r, r5 = r3 * r2;
    const double integral = r.real() / beta_;
    const double f1 = -2 * r3.real() * beta_;
    const double f3 = -24 * r5.real() * beta_ * beta_ * beta_;
    re += 2 * (integral + 0.5 * r2.real() - f1 / 12 + f3 / 720);
    const double d = a0 * a0 + t * t;
    const double im = -2 * a0 * t / (d * d);
    return eta_ * complex_t(re, im);
}

complex_t OhmicBath::correlation_quadrature(double t) const {
    const double W = cutoff_window();
    QuadOptions opt;
    opt.abs_tol = 1e-12 * eta_ * omega_c_ * omega_c_;
    opt.max_intervals = 500000;
    auto coth_term = [this](double w) {
        return w == 0.0 ? 2.0 / beta_ : w / std::tanh(0.5 * beta_ * w);
    };
    std::vector<double> cuts;
    if (t != 0.0) {
        const double period = 2 * pi / std::abs(t);
        for (double w = period; w < W && cuts.size() < 100000; w += period) cuts.push_back(w);
    }
    auto re = quad([&](double w) { return coth_term(w) * std::exp(-w / omega_c_) * std::cos(w * t); },
                   0.0, W, opt, cuts);
    auto im = quad([&](double w) { return w * std::exp(-w / omega_c_) * std::sin(w * t); }, 0.0, W,
                   opt, cuts);
    return eta_ * complex_t(re.value, -im.value);
}

BathTimescales OhmicBath::timescales() const {
    BathTimescales ts;
    ts.tau_B = beta_ / (2 * pi);
    ts.tau_M = std::sqrt(2 * beta_ / omega_c_);
    ts.tau_tr = beta_ * std::log(beta_ * omega_c_);
    ts.transition_defined = beta_ * omega_c_ > 1.0;
    return ts;
}

double spectral_density(const OhmicBath& b, double omega) { return b.spectral_density(omega); }
double gamma_rate(const OhmicBath& b, double omega) { return b.gamma(omega); }
double lamb_shift_S(const OhmicBath& b, double omega) { return b.lamb_shift(omega); }
complex_t correlation_function(const OhmicBath& b, double t) { return b.correlation(t); }
BathTimescales timescales(const OhmicBath& b) { return b.timescales(); }

SpectralPair spectral_pair(const OhmicBath& b) {
    auto shared = std::make_shared<const OhmicBath>(b);
    return {[shared](double w) { return shared->gamma(w); },
            [shared](double w) { return shared->lamb_shift(w); }};
}

Tcl2Validity tcl2_validity(const OhmicBath& b, double g, double t_f, double threshold) {
    Tcl2Validity v;
    v.ratio = g * g * b.eta() * t_f / b.beta();
    v.threshold = threshold;
    v.pass = v.ratio <= threshold;
    return v;
}

RwaValidity rwa_validity(const OhmicBath& b, const schedule::AngularSchedule& a, double t_f,
                         std::size_t samples) {
    if (samples < 2) throw std::invalid_argument("rwa_validity: need at least two samples");
    if (!(t_f > 0.0)) throw std::invalid_argument("rwa_validity: t_f must be > 0");
    RwaValidity v;
    v.inverse_tau_B = 1.0 / b.timescales().tau_B;
    v.min_separation = INFINITY;
    std::size_t failed = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(samples - 1);
        const double sep = std::abs(a.theta.derivative(s)) / t_f;
        v.min_separation = std::min(v.min_separation, sep);
        if (sep < v.inverse_tau_B) ++failed;
    }
    v.fail_fraction = static_cast<double>(failed) / static_cast<double>(samples);
    v.pass = failed == 0;
    return v;
}

} // namespace slitqa::bath
