#include "slitqa/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "slitqa/numerics/special.hpp"

namespace slitqa::bounds {

namespace {

BoundReport classify(BoundReport r) {
    r.status = r.value <= r.threshold ? BoundStatus::pass : BoundStatus::warn;
    return r;
}

} // namespace

std::string to_string(BoundStatus s) { return s == BoundStatus::pass ? "pass" : "warn"; }

nlohmann::json to_json(const BoundReport& r) {
    nlohmann::json inputs = nlohmann::json::object();
    for (const auto& [k, v] : r.inputs) inputs[k] = v;
    return {{"name", r.name},
            {"value", r.value},
            {"threshold", r.threshold},
            {"status", to_string(r.status)},
            {"inputs", inputs}};
}

double fourier_truncation_mass(double alpha, double mu, double tau_f) {
    if (!(alpha > 0.0) || !(mu > 0.0) || !(tau_f > mu))
        throw std::invalid_argument("fourier_truncation_mass: need alpha > 0 and 0 < mu < tau_f");
    return 0.5 * (erfc(alpha * mu) + erfc(alpha * (tau_f - mu)));
}

BoundReport fourier_extension_bound(double alpha, double tau_star, double threshold) {
    const double x = alpha * tau_star;
    if (!(x > 0.0)) throw std::invalid_argument("fourier_extension_bound: alpha*tau_star must be > 0");
    BoundReport r;
    r.name = "fourier_extension";
    r.value = std::isinf(x) ? 0.0 : std::exp(-x * x) / (x * std::sqrt(pi));
    r.threshold = threshold;
    r.inputs = {{"alpha", alpha}, {"tau_star", tau_star}};
    return classify(r);
}

BoundReport k2_extension_bound(double alpha, double tau_star, double threshold) {
    if (!(alpha >= 0.0) || !(tau_star >= 0.0))
        throw std::invalid_argument("k2_extension_bound: alpha and tau_star must be >= 0");
    const double x = alpha * tau_star;
    BoundReport r;
    r.name = "k2_extension";
    r.value = std::exp(-x * x);
    r.threshold = threshold;
    r.inputs = {{"alpha", alpha}, {"tau_star", tau_star}};
    return classify(r);
}

BoundReport magnus_convergence_check(double phi_norm) {
    if (!(phi_norm >= 0.0)) throw std::invalid_argument("magnus_convergence_check: |phi| must be >= 0");
    BoundReport r;
    r.name = "magnus_convergence";
    r.value = phi_norm;
    r.threshold = magnus_xi;
    r.inputs = {{"phi_norm", phi_norm}};
    return classify(r);
}

BoundReport tcl2_bound_report(const bath::OhmicBath& b, double g, double t_f, double threshold) {
    const auto v = bath::tcl2_validity(b, g, t_f, threshold);
    BoundReport r;
    r.name = "tcl2_validity";
    r.value = v.ratio;
    r.threshold = threshold;
    r.inputs = {{"g", g}, {"eta", b.eta()}, {"beta", b.beta()}, {"t_f", t_f}};
    return classify(r);
}

std::vector<BoundReport> gaussian_bounds(const schedule::GaussianProgression& g) {
    const double ts = g.tau_star();
    return {fourier_extension_bound(g.alpha, ts), k2_extension_bound(g.alpha, ts)};
}

} // namespace slitqa::bounds
