#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "jcsim/errors.hpp"

namespace jcsim {

struct IntegratorOptions {
    double atol = 1e-9;         // absolute tolerance per entry
    double rtol = 1e-7;         // relative tolerance per entry
    double h_init = 1e-3;       // initial step (us)
    double h_min_rel = 1e-14;   // step underflow threshold relative to the span
    std::int64_t max_steps = 20'000'000;
};

// Dormand-Prince 4(5) embedded pair with per-entry error control.
//
// State must be an Eigen dense object (matrix or vector, real or complex).
// rhs(t, y) returns dy/dt; observe(i, t, y) is called once per grid point,
// including the first. Integration lands on every grid time exactly (no
// dense-output interpolation), so a discontinuous drive is handled by putting
// its switching time on the grid.
template <class State, class Rhs, class Observer>
void integrate_rk45(Rhs&& rhs, State y, const std::vector<double>& t_grid,
                    const IntegratorOptions& opt, Observer&& observe) {
    if (t_grid.empty()) throw std::invalid_argument("integrate_rk45: empty time grid");
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > t_grid[i - 1])) {
            throw std::invalid_argument("integrate_rk45: time grid must be strictly ascending");
        }
    }

    // Dormand-Prince tableau
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                     b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // b(5th) - b(4th), for the embedded error estimate
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    double t = t_grid.front();
    observe(std::size_t{0}, t, y);

    const double span = t_grid.back() - t_grid.front();
    if (span <= 0.0) return;
    const double h_min = std::max(span, 1.0) * opt.h_min_rel;

    double h = std::max(std::min(opt.h_init, span), h_min);
    State k1 = rhs(t, y);  // FSAL
    std::int64_t steps = 0;

    for (std::size_t gi = 1; gi < t_grid.size(); ++gi) {
        const double t_target = t_grid[gi];
        while (t < t_target) {
            const bool clipped = h >= t_target - t;
            const double hs = clipped ? (t_target - t) : h;

            State k2 = rhs(t + hs * a21, (y + hs * a21 * k1).eval());
            State k3 = rhs(t + hs * 0.3, (y + hs * (a31 * k1 + a32 * k2)).eval());
            State k4 = rhs(t + hs * 0.8, (y + hs * (a41 * k1 + a42 * k2 + a43 * k3)).eval());
            State k5 = rhs(t + hs * (8.0 / 9),
                           (y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)).eval());
            State k6 = rhs(t + hs,
                           (y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)).eval());
            State y_new = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            State k7 = rhs(t + hs, y_new);
            State err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

            double err_ratio =
                (err.array().abs() /
                 (opt.atol + opt.rtol * y.array().abs().max(y_new.array().abs())))
                    .maxCoeff();
            // NaN or inf (blowup, zero tolerances): reject and shrink hard
            if (!std::isfinite(err_ratio)) err_ratio = 1e30;

            const double safe = 0.9 * std::pow(std::max(err_ratio, 1e-10), -0.2);
            const double grown = hs * std::clamp(safe, 0.2, 5.0);
            if (err_ratio <= 1.0) {
                t += hs;
                y.swap(y_new);
                k1.swap(k7);
                // a step clipped to the grid must not shrink the running estimate
                h = clipped ? std::max(h, grown) : grown;
            } else {
                h = grown;  // rejected: grown < hs, retry smaller
            }

            if (h < h_min) {
                throw numerical_error("integrate_rk45: step size underflow at t = " +
                                      std::to_string(t) + " (stiff failure)");
            }
            if (++steps > opt.max_steps) {
                throw numerical_error("integrate_rk45: exceeded max step count");
            }
        }
        observe(gi, t, y);
    }
}

// Convenience: uniform grid of n points over [t0, t1].
inline std::vector<double> linspace(double t0, double t1, int n) {
    if (n < 2) throw std::invalid_argument("linspace: need at least 2 points");
    std::vector<double> out(static_cast<std::size_t>(n));
    const double dt = (t1 - t0) / (n - 1);
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = t0 + dt * i;
    out.back() = t1;
    return out;
}

}  // namespace jcsim
