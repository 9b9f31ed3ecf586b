#include "slitqa/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "slitqa/numerics/interp.hpp"
#include "slitqa/numerics/ode.hpp"
#include "slitqa/numerics/quadrature.hpp"

namespace slitqa::schedule {

namespace {
constexpr std::size_t table_intervals = 2048;
constexpr double fd_step = 1e-5;

// Tables are built once and reused by every solver, so they get a tighter budget.
ToleranceConfig table_tolerance(const ToleranceConfig& tol) {
    ToleranceConfig t = tol;
    t.ode_rel_tol *= 1e-2;
    t.ode_abs_tol *= 1e-2;
    return t;
}
} // namespace

double Curve::derivative(double s) const {
    if (df_) return df_(s);
    const double h = fd_step;
    const auto& f = f_;
    if (s - 2 * h < 0.0)
        return (-25 * f(s) + 48 * f(s + h) - 36 * f(s + 2 * h) + 16 * f(s + 3 * h) - 3 * f(s + 4 * h)) / (12 * h);
    if (s + 2 * h > 1.0)
        return (25 * f(s) - 48 * f(s - h) + 36 * f(s - 2 * h) - 16 * f(s - 3 * h) + 3 * f(s - 4 * h)) / (12 * h);
    return (f(s - 2 * h) - 8 * f(s - h) + 8 * f(s + h) - f(s + 2 * h)) / (12 * h);
}

Curve Curve::constant(double v) {
    return Curve([v](double) { return v; }, [](double) { return 0.0; });
}

Curve Curve::tabulated(std::vector<double> s, std::vector<double> y) {
    auto spline = std::make_shared<const CubicSpline>(std::move(s), std::move(y));
    return Curve([spline](double x) { return (*spline)(x); },
                 [spline](double x) { return spline->derivative(x); });
}

Curve Curve::hermite(std::vector<double> y, std::vector<double> dy) {
    auto table = std::make_shared<const HermiteTable>(0.0, 1.0, std::move(y), std::move(dy));
    return Curve([table](double x) { return (*table)(x); },
                 [table](double x) { return table->derivative(x); });
}

double Progression::angle_at(double tau, double tol) const {
    if (angle) return angle(tau);
    QuadOptions opt;
    opt.abs_tol = tol;
    return quad(rate, 0.0, tau, opt, breakpoints).value;
}

// ---------------------------------------------------------------- Gaussian pulses

GaussianProgression GaussianProgression::two_step(double alpha, double mu, double tau_f) {
    GaussianProgression g;
    g.alpha = alpha;
    g.offsets = {-mu, mu};
    g.tau_f = tau_f;
    return g;
}

GaussianProgression GaussianProgression::single(double alpha, double tau_f, double offset) {
    GaussianProgression g;
    g.alpha = alpha;
    g.offsets = {offset};
    g.tau_f = tau_f;
    return g;
}

double GaussianProgression::amplitude() const {
    const double k = static_cast<double>(offsets.size());
    if (normalization == Normalization::full_line) return total_angle * alpha / (k * std::sqrt(pi));
    double area = 0.0;
    for (std::size_t i = 0; i < offsets.size(); ++i) {
        const double c = center(i);
        area += std::sqrt(pi) / (2 * alpha) * (std::erf(alpha * (tau_f - c)) + std::erf(alpha * c));
    }
    return total_angle / area;
}

double GaussianProgression::tau_star() const {
    double best = tau_f;
    for (std::size_t i = 0; i < offsets.size(); ++i) {
        const double c = center(i);
        best = std::min({best, c, tau_f - c});
    }
    return best;
}

double GaussianProgression::rate(double tau) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < offsets.size(); ++i) {
        const double d = alpha * (tau - center(i));
        sum += std::exp(-d * d);
    }
    return amplitude() * sum;
}

double GaussianProgression::angle(double tau) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < offsets.size(); ++i) {
        const double c = center(i);
        sum += std::erf(alpha * (tau - c)) + std::erf(alpha * c);
    }
    return amplitude() * std::sqrt(pi) / (2 * alpha) * sum;
}

std::vector<std::string> GaussianProgression::warnings() const {
    std::vector<std::string> w;
    const double x = containment();
    if (x < 2.0) {
        std::ostringstream os;
        os << "gaussian progression: containment alpha*tau_star = " << x
           << " is below 2; pulse tails are truncated by the anneal window";
        w.push_back(os.str());
    }
    return w;
}

void GaussianProgression::validate() const {
    if (!(alpha > 0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be positive");
    if (!(tau_f > 0) || !std::isfinite(tau_f)) throw std::invalid_argument("tau_f must be positive");
    if (offsets.empty()) throw std::invalid_argument("offsets must not be empty");
    for (std::size_t i = 0; i < offsets.size(); ++i) {
        const double c = center(i);
        if (!(c > 0.0 && c < tau_f)) throw std::invalid_argument("pulse center outside (0, tau_f)");
    }
}

Progression gaussian_progression_fn(const GaussianProgression& g) {
    g.validate();
    Progression p;
    p.rate = [g](double tau) { return g.rate(tau); };
    p.angle = [g](double tau) { return g.angle(tau); };
    p.tau_f = g.tau_f;
    for (std::size_t i = 0; i < g.offsets.size(); ++i) p.breakpoints.push_back(g.center(i));
    return p;
}

// ---------------------------------------------------------------- gaps

GapProfile GapProfile::constant(double value) {
    return {"constant", Curve::constant(value)};
}

GapProfile GapProfile::two_crossing(double depth, double floor, double cycles) {
    const double k = cycles * pi;
    return {"two_crossing",
            Curve([=](double s) { const double c = std::cos(k * s); return depth * c * c + floor; },
                  [=](double s) { return -depth * k * std::sin(2 * k * s); })};
}

GapProfile GapProfile::tabulated(std::vector<double> s, std::vector<double> omega) {
    return {"tabulated", Curve::tabulated(std::move(s), std::move(omega))};
}

void GapProfile::validate(std::size_t samples) const {
    for (std::size_t i = 0; i < samples; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(samples - 1);
        const double w = omega(s);
        if (!(w > 0.0) || w > 1.0 + 1e-12) {
            std::ostringstream os;
            os << "gap profile value " << w << " at s = " << s << " outside (0, 1]";
            throw std::invalid_argument(os.str());
        }
    }
}

// ---------------------------------------------------------------- conversions

CumulativeGap cumulative_gap(const Curve& omega, const ToleranceConfig& tol) {
    using V = Eigen::Matrix<double, 1, 1>;
    auto traj = integrate_ode([&](double s, const V&) { return V(omega(s)); }, V(0.0), 0.0, 1.0, table_tolerance(tol));
    std::vector<double> y(table_intervals + 1), dy(table_intervals + 1);
    for (std::size_t i = 0; i <= table_intervals; ++i) {
        const double s = static_cast<double>(i) / table_intervals;
        y[i] = i == table_intervals ? traj.back()(0) : traj(s)(0);
        dy[i] = omega(s);
    }
    const double tau_f = y.back();
    auto table = std::make_shared<const HermiteTable>(0.0, 1.0, std::move(y), std::move(dy));
    Curve tau([table](double s) { return (*table)(s); }, [omega](double s) { return omega(s); });
    return {tau, tau_f};
}

CumulativeGap cumulative_gap(const AngularSchedule& a, const ToleranceConfig& tol) {
    return cumulative_gap(a.omega, tol);
}

CartesianSchedule linear_schedule() {
    return {Curve([](double s) { return 1.0 - s; }, [](double) { return -1.0; }),
            Curve([](double s) { return s; }, [](double) { return 1.0; })};
}

AngularSchedule angular_from_cartesian(const CartesianSchedule& c, const ToleranceConfig& tol) {
    const Curve A = c.A, B = c.B;
    // continuity reference for the atan2 branch
    const std::size_t n = 4 * table_intervals;
    auto unwrapped = std::make_shared<std::vector<double>>(n + 1);
    double prev = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
        const double s = static_cast<double>(i) / n;
        const double a = A(s), b = B(s);
        if (std::hypot(a, b) < 1e-12) {
            std::ostringstream os;
            os << "gap closes at s = " << s;
            throw GapClosureError(os.str());
        }
        double th = std::atan2(b, a);
        if (i > 0) th += 2 * pi * std::round((prev - th) / (2 * pi));
        (*unwrapped)[i] = th;
        prev = th;
    }

    AngularSchedule out;
    out.omega = Curve([A, B](double s) { return std::hypot(A(s), B(s)); },
                      [A, B](double s) {
                          const double a = A(s), b = B(s);
                          return (a * A.derivative(s) + b * B.derivative(s)) / std::hypot(a, b);
                      });
    out.theta = Curve(
        [A, B, unwrapped, n](double s) {
            const double u = std::clamp(s, 0.0, 1.0) * n;
            const std::size_t i = std::min(static_cast<std::size_t>(u), n - 1);
            const double t = u - static_cast<double>(i);
            const double ref = (1 - t) * (*unwrapped)[i] + t * (*unwrapped)[i + 1];
            const double raw = std::atan2(B(s), A(s));
            return raw + 2 * pi * std::round((ref - raw) / (2 * pi));
        },
        [A, B](double s) {
            const double a = A(s), b = B(s);
            return (a * B.derivative(s) - b * A.derivative(s)) / (a * a + b * b);
        });
    const auto gap = cumulative_gap(out.omega, tol);
    out.tau = gap.tau;
    out.tau_f = gap.tau_f;
    return out;
}

CartesianSchedule cartesian_from_angular(const AngularSchedule& a) {
    const Curve W = a.omega, T = a.theta;
    return {Curve([W, T](double s) { return W(s) * std::cos(T(s)); },
                  [W, T](double s) {
                      const double th = T(s);
                      return W.derivative(s) * std::cos(th) - W(s) * std::sin(th) * T.derivative(s);
                  }),
            Curve([W, T](double s) { return W(s) * std::sin(T(s)); },
                  [W, T](double s) {
                      const double th = T(s);
                      return W.derivative(s) * std::sin(th) + W(s) * std::cos(th) * T.derivative(s);
                  })};
}

std::function<double(double)> progression_from_schedule(const CartesianSchedule& c) {
    const Curve A = c.A, B = c.B;
    return [A, B](double s) {
        const double a = A(s), b = B(s);
        const double w = std::hypot(a, b);
        if (w < 1e-12) {
            std::ostringstream os;
            os << "gap closes at s = " << s;
            throw GapClosureError(os.str());
        }
        return (B.derivative(s) * a - A.derivative(s) * b) / (w * w * w);
    };
}

AngularSchedule synthesize_schedule(const GapProfile& gap, const Progression& prog,
                                    SynthesisReport* report, const ToleranceConfig& tol,
                                    double target_angle) {
    using V = Eigen::Vector2d;
    const Curve W = gap.omega;
    auto rhs = [&](double s, const V& y) {
        const double w = W(s);
        return V(w, w * prog.rate(y(0)));
    };
    auto traj = integrate_ode(rhs, V(0.0, 0.0), 0.0, 1.0, table_tolerance(tol));

    std::vector<double> tau(table_intervals + 1), dtau(table_intervals + 1);
    std::vector<double> th(table_intervals + 1), dth(table_intervals + 1);
    for (std::size_t i = 0; i <= table_intervals; ++i) {
        const double s = static_cast<double>(i) / table_intervals;
        const V y = i == table_intervals ? traj.back() : traj(s);
        const V d = rhs(s, y);
        tau[i] = y(0);
        dtau[i] = d(0);
        th[i] = y(1);
        dth[i] = d(1);
    }

    AngularSchedule out;
    out.omega = W;
    out.tau_f = tau.back();
    auto tau_table = std::make_shared<const HermiteTable>(0.0, 1.0, std::move(tau), std::move(dtau));
    out.tau = Curve([tau_table](double s) { return (*tau_table)(s); }, [W](double s) { return W(s); });
    auto th_table = std::make_shared<const HermiteTable>(0.0, 1.0, std::move(th), std::move(dth));
    const auto rate = prog.rate;
    out.theta = Curve([th_table](double s) { return (*th_table)(s); },
                      [W, tau_table, rate](double s) { return W(s) * rate((*tau_table)(s)); });
    out.progression = std::make_shared<const Progression>(prog);

    const double end = traj.back()(1);
    if (report) *report = {end, end - target_angle};
    if (std::abs(end - target_angle) > 1e-3) {
        std::ostringstream os;
        os << "synthesis: theta(1) = " << end << " deviates from " << target_angle
           << " by more than 1e-3 (progression/gap mismatch)";
        out.warnings.push_back(os.str());
    }
    if (std::abs(out.tau_f - prog.tau_f) > 1e-6 * std::max(1.0, prog.tau_f)) {
        std::ostringstream os;
        os << "synthesis: gap accumulates tau_f = " << out.tau_f << " but the progression is defined on [0, "
           << prog.tau_f << "]";
        out.warnings.push_back(os.str());
    }
    return out;
}

double invert_tau(const AngularSchedule& a, double target) {
    if (target <= 0.0) return 0.0;
    if (target >= a.tau_f) return 1.0;
    double lo = 0.0, hi = 1.0;
    double s = target / a.tau_f;
    for (int it = 0; it < 100; ++it) {
        const double f = a.tau(s) - target;
        if (std::abs(f) < 1e-15 * std::max(1.0, a.tau_f)) break;
        if (f > 0) hi = s; else lo = s;
        double next = s - f / a.omega(s);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - s) < 1e-16) { s = next; break; }
        s = next;
    }
    return s;
}

Progression tau_view(const AngularSchedule& a) {
    if (a.progression) return *a.progression;
    Progression p;
    p.tau_f = a.tau_f;
    p.rate = [a](double tau) {
        const double s = invert_tau(a, tau);
        return a.theta.derivative(s) / a.omega(s);
    };
    p.angle = [a](double tau) { return a.theta(invert_tau(a, tau)); };
    return p;
}

} // namespace slitqa::schedule
