#pragma once

// Independent solver for the nonlinear problem
//   (1 + delta y) y'' + delta (y')^2 + 2 x y' = 0,  y(0) = 0,  y(inf) = 1
// by shooting on y'(0). Used only to cross-check the fixed-point solution.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "moderf/contraction.hpp"
#include "moderf/errors.hpp"
#include "moderf/function_space.hpp"

namespace moderf {

struct ShootingResult {
    double slope0 = 0.0;
    double far_field_residual = 0.0;  // |y(x_far) - 1|
    GridFunction trace;
    std::size_t bisection_steps = 0;
};

inline constexpr double kDefaultStepTol = 1e-10;

namespace detail {

using State = std::array<double, 2>;  // (y, y')

inline State ode_rhs(double delta, double x, const State& s) {
    const double coeff = 1.0 + delta * s[0];
    if (coeff < 0.5) {
        throw BlowUp("coefficient 1 + delta*y fell below 0.5", x, s[0]);
    }
    return {s[1], -(delta * s[1] * s[1] + 2.0 * x * s[1]) / coeff};
}

// Dormand-Prince 5(4) tableau.
struct DormandPrince {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // b - b* (error weights)
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

struct Step {
    State y;
    State dydx;
    double error;
};

inline Step dp_step(double delta, double x, const State& y, const State& k1, double h) {
    using T = DormandPrince;
    const auto comb = [&](std::initializer_list<std::pair<double, const State*>> terms) {
        State out = y;
        for (const auto& [w, k] : terms) {
            out[0] += h * w * (*k)[0];
            out[1] += h * w * (*k)[1];
        }
        return out;
    };
    const State k2 = ode_rhs(delta, x + T::c2 * h, comb({{T::a21, &k1}}));
    const State k3 = ode_rhs(delta, x + T::c3 * h, comb({{T::a31, &k1}, {T::a32, &k2}}));
    const State k4 =
        ode_rhs(delta, x + T::c4 * h, comb({{T::a41, &k1}, {T::a42, &k2}, {T::a43, &k3}}));
    const State k5 = ode_rhs(delta, x + T::c5 * h,
                             comb({{T::a51, &k1}, {T::a52, &k2}, {T::a53, &k3}, {T::a54, &k4}}));
    const State k6 = ode_rhs(
        delta, x + h,
        comb({{T::a61, &k1}, {T::a62, &k2}, {T::a63, &k3}, {T::a64, &k4}, {T::a65, &k5}}));
    const State y5 =
        comb({{T::b1, &k1}, {T::b3, &k3}, {T::b4, &k4}, {T::b5, &k5}, {T::b6, &k6}});
    const State k7 = ode_rhs(delta, x + h, y5);
    double err = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
        const double e = h * (T::e1 * k1[i] + T::e3 * k3[i] + T::e4 * k4[i] + T::e5 * k5[i] +
                              T::e6 * k6[i] + T::e7 * k7[i]);
        err = std::max(err, std::abs(e));
    }
    return {y5, k7, err};
}

// Band outside which a shot is declared divergent.
inline constexpr double kBandLow = -0.5;
inline constexpr double kBandHigh = 2.0;

}  // namespace detail

/// Integrates the initial-value problem y(0) = 0, y'(0) = slope0 and records
/// (y, y') at every node of `nodes` (nodes[0] must be 0). Local error per step
/// is held below step_tol.
inline GridFunction integrate_ivp_on(double delta, double slope0, std::span<const double> nodes,
                                     double step_tol) {
    if (!std::isfinite(delta) || delta <= -1.0) throw DomainError("delta must exceed -1");
    if (!(slope0 > 0.0) || !std::isfinite(slope0)) throw DomainError("slope0 must be positive");
    if (!(step_tol > 0.0)) throw InvalidArgument("step_tol must be positive");
    if (nodes.size() < 2 || nodes.front() != 0.0) {
        throw InvalidArgument("output nodes must start at 0 and hold at least two points");
    }

    std::vector<double> values(nodes.size());
    std::vector<double> slopes(nodes.size());
    detail::State y{0.0, slope0};
    double x = 0.0;
    detail::State k1 = detail::ode_rhs(delta, x, y);
    values[0] = y[0];
    slopes[0] = y[1];
    double h = std::min(0.01, nodes[1]);

    for (std::size_t i = 1; i < nodes.size(); ++i) {
        const double target = nodes[i];
        while (x < target) {
            const bool last = x + h >= target;
            const double step = last ? target - x : h;
            if (step < 1e-14 * std::max(1.0, std::abs(x))) {
                throw StiffnessFailure("step size underflow at x = " + std::to_string(x));
            }
            const auto trial = detail::dp_step(delta, x, y, k1, step);
            const double ratio = trial.error / step_tol;
            const double factor =
                ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
            if (ratio <= 1.0) {
                x = last ? target : x + step;
                y = trial.y;
                k1 = trial.dydx;
                if (y[0] < detail::kBandLow || y[0] > detail::kBandHigh || !std::isfinite(y[0])) {
                    throw BlowUp("shot left the band [-0.5, 2]", x, y[0]);
                }
                // Keep the proposal when a short final step was forced by the node.
                if (!last || step >= h) h = step * factor;
            } else {
                h = step * factor;
            }
        }
        values[i] = y[0];
        slopes[i] = y[1];
    }
    const double tail = values.back();
    return GridFunction(std::vector<double>(nodes.begin(), nodes.end()), std::move(values), tail,
                        std::move(slopes));
}

inline GridFunction integrate_ivp(double delta, double slope0, double x_far,
                                  double step_tol = kDefaultStepTol,
                                  double spacing = kDefaultSpacing) {
    const auto nodes = uniform_nodes(x_far, spacing);
    return integrate_ivp_on(delta, slope0, nodes, step_tol);
}

namespace detail {

inline constexpr double kSlopeLow = 0.1;
inline constexpr double kSlopeHigh = 5.0;

struct Shot {
    double far_value;  // +inf for a shot that overshot the band
    std::optional<GridFunction> trace;
};

inline Shot fire(double delta, double slope, std::span<const double> nodes, double step_tol) {
    try {
        auto trace = integrate_ivp_on(delta, slope, nodes, step_tol);
        const double v = trace.values().back();
        return {v, std::move(trace)};
    } catch (const BlowUp& e) {
        if (e.y() > kBandHigh) return {std::numeric_limits<double>::infinity(), std::nullopt};
        return {-std::numeric_limits<double>::infinity(), std::nullopt};
    }
}

}  // namespace detail

/// Bisection on y'(0) until |y(x_far) - 1| <= tol, recording on `nodes`.
inline ShootingResult solve_shooting_on(double delta, double tol, std::span<const double> nodes,
                                        double step_tol = kDefaultStepTol) {
    if (!std::isfinite(delta) || delta < 0.0 || delta >= delta1_lower()) {
        throw DeltaOutOfRange("shooting is restricted to 0 <= delta < delta_1");
    }
    if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");

    double lo = detail::kSlopeLow;
    double hi = detail::kSlopeHigh;
    auto shot_lo = detail::fire(delta, lo, nodes, step_tol);
    auto shot_hi = detail::fire(delta, hi, nodes, step_tol);
    if (!(shot_lo.far_value < 1.0 && shot_hi.far_value > 1.0)) {
        throw BracketFailure("far-field value does not straddle 1 for slopes in [0.1, 5]");
    }

    for (std::size_t steps = 1; steps <= 200; ++steps) {
        const double mid = 0.5 * (lo + hi);
        auto shot = detail::fire(delta, mid, nodes, step_tol);
        if (!(shot.far_value >= shot_lo.far_value && shot.far_value <= shot_hi.far_value)) {
            throw BracketFailure("far-field value is not monotone in the initial slope");
        }
        const double defect = shot.far_value - 1.0;
        if (std::abs(defect) <= tol && shot.trace) {
            return {mid, std::abs(defect), std::move(*shot.trace), steps};
        }
        if (defect < 0.0) {
            lo = mid;
            shot_lo = std::move(shot);
        } else {
            hi = mid;
            shot_hi = std::move(shot);
        }
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
    }
    throw NonConvergence("shooting bisection stalled before reaching tol = " + std::to_string(tol));
}

inline ShootingResult solve_shooting(double delta, double tol, double x_far,
                                     double step_tol = kDefaultStepTol,
                                     double spacing = kDefaultSpacing) {
    const auto nodes = uniform_nodes(x_far, spacing);
    return solve_shooting_on(delta, tol, nodes, step_tol);
}

/// sup-distance between a fixed-point solution and the shooting trace on the
/// same nodes.
inline double compare_solutions(double delta, const GridFunction& picard, double tol,
                                double step_tol = kDefaultStepTol) {
    const auto shot = solve_shooting_on(delta, tol, picard.xs(), step_tol);
    return sup_distance(picard, shot.trace);
}

}  // namespace moderf
