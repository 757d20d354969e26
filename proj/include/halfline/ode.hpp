#pragma once

// Dormand-Prince 5(4) integrator for Eigen-matrix valued first-order systems.
// The error norm is the RMS of the entries, which is invariant under unitary
// changes of basis, so conjugated problems take the same steps.

#include <algorithm>
#include <cmath>
#include <limits>

#include "halfline/error.hpp"
#include "halfline/matkernel.hpp"

namespace halfline::ode {

struct Options {
    double rtol = 1e-10;
    double atol = 1e-12;
    long max_steps = 2'000'000;
};

/// Running totals over one or more `integrate` calls.
struct Stats {
    long steps = 0;
    long rejected = 0;
    double local_error = 0.0;  // sum of accepted local error estimates, max-row-sum norm
    double state_scale = 0.0;  // largest max-row-sum norm of the state seen
    double last_step = 0.0;    // signed step to reuse on the next call
};

namespace detail {

inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                        b6 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;

template <typename M>
double rms(const M& m) {
    return m.norm() / std::sqrt(static_cast<double>(std::max<Eigen::Index>(1, m.size())));
}

} // namespace detail

/// Advance y from x0 to x1 (either direction).  `rhs(x, y)` returns dy/dx.
/// Throws IntegratorFailure on step-size underflow or when the step budget
/// is exhausted.
template <typename State, typename Rhs>
State integrate(Rhs&& rhs, double x0, double x1, State y, const Options& opt, Stats& stats) {
    using namespace detail;
    const double span = x1 - x0;
    if (span == 0.0) return y;
    const double dir = span > 0 ? 1.0 : -1.0;
    const double eps = std::numeric_limits<double>::epsilon();

    State k1 = rhs(x0, y);
    double h = std::abs(stats.last_step);
    if (!(h > 0.0)) {
        // Starting step from the first derivative scale.
        const double d0 = rms(y);
        const double d1 = rms(k1);
        const double sc = opt.atol + opt.rtol * d0;
        h = (d0 < 1e-5 * sc || d1 < 1e-5 * sc) ? 1e-6 : 0.01 * d0 / d1;
        h = std::max(h, 1e-12 * std::abs(span));
    }
    h = std::min(h, std::abs(span));

    double x = x0;
    stats.state_scale = std::max(stats.state_scale, row_sum_norm(y));
    long steps = 0;
    while (dir * (x1 - x) > 0.0) {
        if (++steps > opt.max_steps) throw Error(ErrorCode::IntegratorFailure, "step budget exhausted");
        bool last = false;
        if (h >= std::abs(x1 - x)) {
            h = std::abs(x1 - x);
            last = true;
        }
        if (h <= 16.0 * eps * std::max(1.0, std::abs(x)))
            throw Error(ErrorCode::IntegratorFailure, "step size underflow");
        const double s = dir * h;

        const State k2 = rhs(x + c2 * s, State(y + s * (a21 * k1)));
        const State k3 = rhs(x + c3 * s, State(y + s * (a31 * k1 + a32 * k2)));
        const State k4 = rhs(x + c4 * s, State(y + s * (a41 * k1 + a42 * k2 + a43 * k3)));
        const State k5 = rhs(x + c5 * s, State(y + s * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
        const State k6 =
            rhs(x + s, State(y + s * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
        State ynew = y + s * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const double xnew = last ? x1 : x + s;
        State k7 = rhs(xnew, ynew);
        const State err = s * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        const double sc = opt.atol + opt.rtol * std::max(rms(y), rms(ynew));
        const double ratio = rms(err) / sc;
        if (!std::isfinite(ratio)) throw Error(ErrorCode::IntegratorFailure, "non-finite state");

        if (ratio <= 1.0) {
            x = xnew;
            y = std::move(ynew);
            k1 = std::move(k7);
            ++stats.steps;
            stats.local_error += row_sum_norm(err);
            stats.state_scale = std::max(stats.state_scale, row_sum_norm(y));
            const double grow = ratio == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(ratio, -0.2));
            h *= std::max(1.0, grow);
            if (!last) stats.last_step = dir * h;
        } else {
            ++stats.rejected;
            h *= std::max(0.2, 0.9 * std::pow(ratio, -0.2));
        }
    }
    return y;
}

/// Error estimate for a finished run: accumulated local errors plus a
/// roundoff floor proportional to the number of steps.
inline double error_estimate(const Stats& s) {
    return s.local_error +
           static_cast<double>(s.steps + 1) * std::numeric_limits<double>::epsilon() * s.state_scale;
}

} // namespace halfline::ode
