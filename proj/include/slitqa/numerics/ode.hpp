#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "slitqa/numerics/types.hpp"

namespace slitqa {

struct OdeOptions {
    bool dense{true};          // keep interpolation data for every accepted step
    double initial_step{0.0};  // 0 picks a step from the derivative scale
    double max_step{0.0};      // 0 means the whole span
    std::size_t max_steps{2000000};
    std::vector<double> breakpoints;  // steps never straddle these
};

template <typename State>
class OdeTrajectory;

/// Adaptive Dormand-Prince 5(4) integration of y' = rhs(t, y) from t0 to t1.
/// Throws SolverError on step-size underflow or step-budget exhaustion.
template <typename State, typename Rhs>
OdeTrajectory<State> integrate_ode(Rhs&& rhs, const State& y_init, double t0, double t1,
                                   const ToleranceConfig& tol, const OdeOptions& opt = {});

/// Accepted-step history of a Dormand-Prince integration with 4th-order
/// continuous extension.
template <typename State>
class OdeTrajectory {
public:
    struct Segment {
        double t0{0.0}, h{0.0};
        std::array<State, 5> r;
    };

    double t_begin() const { return t0_; }
    double t_end() const { return t1_; }
    const State& front() const { return y0_; }
    const State& back() const { return y1_; }
    std::size_t steps() const { return steps_; }
    std::size_t rejected() const { return rejected_; }
    bool has_dense() const { return !segments_.empty() || t0_ == t1_; }

    /// Interpolated state at t in [t_begin, t_end].
    State operator()(double t) const {
        if (segments_.empty()) {
            if (t == t1_) return y1_;
            if (t == t0_) return y0_;
            throw std::logic_error("OdeTrajectory: dense output was not recorded");
        }
        const bool forward = t1_ >= t0_;
        auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                                   [forward](double v, const Segment& s) {
                                       return forward ? v < s.t0 : v > s.t0;
                                   });
        if (it != segments_.begin()) --it;
        const Segment& s = *it;
        const double th = (t - s.t0) / s.h;
        const double th1 = 1.0 - th;
        return s.r[0] + th * (s.r[1] + th1 * (s.r[2] + th * (s.r[3] + th1 * s.r[4])));
    }

private:
    template <typename S, typename R>
    friend OdeTrajectory<S> integrate_ode(R&&, const S&, double, double, const ToleranceConfig&,
                                          const OdeOptions&);
    double t0_{0.0}, t1_{0.0};
    State y0_, y1_;
    std::vector<Segment> segments_;
    std::size_t steps_{0}, rejected_{0};
};

namespace detail {

template <typename State>
double error_norm(const State& err, const State& y, const State& ynew, const ToleranceConfig& tol) {
    const auto scale = tol.ode_abs_tol + tol.ode_rel_tol * y.array().abs().max(ynew.array().abs());
    return std::sqrt((err.array().abs() / scale).square().mean());
}

} // namespace detail

template <typename State, typename Rhs>
OdeTrajectory<State> integrate_ode(Rhs&& rhs, const State& y_init, double t0, double t1,
                                   const ToleranceConfig& tol, const OdeOptions& opt) {
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                     a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                     d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                     d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

    tol.validate();
    OdeTrajectory<State> out;
    out.t0_ = t0;
    out.t1_ = t1;
    out.y0_ = y_init;
    out.y1_ = y_init;
    if (t0 == t1) return out;

    const double dir = t1 > t0 ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);
    const double hmax = opt.max_step > 0 ? std::min(opt.max_step, span) : span;

    std::vector<double> stops;
    for (double b : opt.breakpoints)
        if ((b - t0) * dir > 0 && (t1 - b) * dir > 0) stops.push_back(b);
    std::sort(stops.begin(), stops.end(), [dir](double a, double b) { return a * dir < b * dir; });
    stops.push_back(t1);
    std::size_t next_stop = 0;

    State y = y_init;
    double t = t0;
    State k1 = rhs(t, y);

    double h = opt.initial_step;
    if (h <= 0) {
        const double d0 = y.norm(), dd = k1.norm();
        h = (d0 < 1e-5 || dd < 1e-5) ? 1e-6 * std::max(1.0, span) : 0.01 * d0 / dd;
        h = std::min(h, hmax);
    }
    h = std::min(h, hmax);

    double err_prev = 1e-4;
    while ((t1 - t) * dir > 0) {
        if (out.steps_ + out.rejected_ >= opt.max_steps) {
            char msg[160];
            std::snprintf(msg, sizeof msg, "integrate_ode: step budget exhausted at t = %.12g", t);
            throw SolverError(msg);
        }
        const double target = stops[next_stop];
        bool hits_stop = false;
        if (h * 1.01 >= std::abs(target - t)) {
            h = std::abs(target - t);
            hits_stop = true;
        }
        if (h <= 1e-14 * std::max(1.0, std::abs(t))) {
            char msg[160];
            std::snprintf(msg, sizeof msg, "integrate_ode: step size underflow at t = %.12g", t);
            throw SolverError(msg);
        }
        const double hs = dir * h;
        const State k2 = rhs(t + c2 * hs, State(y + hs * (a21 * k1)));
        const State k3 = rhs(t + c3 * hs, State(y + hs * (a31 * k1 + a32 * k2)));
        const State k4 = rhs(t + c4 * hs, State(y + hs * (a41 * k1 + a42 * k2 + a43 * k3)));
        const State k5 =
            rhs(t + c5 * hs, State(y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
        const State k6 = rhs(t + hs, State(y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 +
                                                     a65 * k5)));
        const State ynew =
            y + hs * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        const double tnew = hits_stop ? target : t + hs;
        const State k7 = rhs(tnew, ynew);
        const State err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double en = detail::error_norm(err, y, ynew, tol);

        if (!std::isfinite(en)) {
            ++out.rejected_;
            h *= 0.1;
            continue;
        }
        if (en <= 1.0) {
            if (opt.dense) {
                typename OdeTrajectory<State>::Segment seg;
                seg.t0 = t;
                seg.h = hs;
                seg.r[0] = y;
                seg.r[1] = ynew - y;
                seg.r[2] = hs * k1 - seg.r[1];
                seg.r[3] = seg.r[1] - hs * k7 - seg.r[2];
                seg.r[4] = hs * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
                out.segments_.push_back(std::move(seg));
            }
            y = ynew;
            t = tnew;
            k1 = k7;
            ++out.steps_;
            if (hits_stop) {
                ++next_stop;
                // derivative may be discontinuous across a breakpoint
                if (next_stop < stops.size()) k1 = rhs(t, y);
            }
            // PI step-size controller (Hairer's beta = 0.04)
            double fac = 0.9 * std::pow(std::max(en, 1e-10), -0.7 / 5.0) * std::pow(err_prev, 0.04);
            fac = std::clamp(fac, 0.2, 10.0);
            err_prev = std::max(en, 1e-4);
            h = std::min(h * fac, hmax);
        } else {
            ++out.rejected_;
            h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
        }
    }
    out.y1_ = y;
    out.t1_ = t1;
    return out;
}

} // namespace slitqa
