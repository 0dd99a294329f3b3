#pragma once

// Banach fixed-point iteration h_{n+1} = tau(h_n) with the a-posteriori
// stopping rule  gamma/(1-gamma) * ||h_{n+1} - h_n|| <= stop_tol,  gamma = g(delta).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "moderf/contraction.hpp"
#include "moderf/errors.hpp"
#include "moderf/function_space.hpp"
#include "moderf/tau_operator.hpp"

namespace moderf {

struct IterationReport {
    std::size_t iterations = 0;
    std::vector<double> residuals;         // ||h_{n+1} - h_n|| per step
    std::vector<double> empirical_ratios;  // residual_{n+1} / residual_n
    double contraction_modulus = 0.0;      // gamma = g(delta)
    double a_posteriori_bound = std::numeric_limits<double>::infinity();
    bool converged = false;
    GridFunction solution;
};

/// Thrown when max_iter is reached; carries the partial trace.
class IterationLimitReached : public NonConvergence {
public:
    explicit IterationLimitReached(IterationReport report)
        : NonConvergence("fixed-point iteration did not reach the requested bound in " +
                         std::to_string(report.iterations) + " steps"),
          report_(std::move(report)) {}

    const IterationReport& report() const noexcept { return report_; }

private:
    IterationReport report_;
};

inline constexpr std::size_t kDefaultMaxIterations = 200;

/// Banach error certificate for one step: gamma / (1 - gamma) * residual.
inline double a_posteriori_bound(double gamma, double residual) {
    if (!(gamma < 1.0)) return std::numeric_limits<double>::infinity();
    return gamma / (1.0 - gamma) * residual;
}

/// Runs the fixed-point iteration from `initial`. The quadrature tolerance is
/// capped at stop_tol / 100 so that quadrature noise stays below the stopping
/// threshold.
inline IterationReport solve(OperatorParams params, const GridFunction& initial, double stop_tol,
                             std::size_t max_iter = kDefaultMaxIterations) {
    params.validate();
    if (!(stop_tol > 0.0)) throw InvalidArgument("stop_tol must be positive");
    if (max_iter == 0) throw InvalidArgument("max_iter must be positive");
    if (params.delta >= delta1_lower()) {
        throw DeltaOutOfRange("delta = " + std::to_string(params.delta) +
                              " is not below delta_1 = " + std::to_string(delta1_lower()) +
                              "; no contraction guarantee");
    }
    params.quad_tol = std::min(params.quad_tol, stop_tol / 100.0);
    if (!check_K_membership(initial, params.membership_tol).in_K) {
        throw KViolation("initial iterate is not in K");
    }

    const double gamma = g_of(params.delta);
    IterationReport report{0, {}, {}, gamma, std::numeric_limits<double>::infinity(), false, initial};
    GridFunction current = initial;
    for (std::size_t n = 0; n < max_iter; ++n) {
        GridFunction next = apply_tau(current, params);
        const auto membership = check_K_membership(next, params.membership_tol);
        if (!membership.in_K) {
            throw KViolation("iterate " + std::to_string(n + 1) + " left K (violation " +
                             std::to_string(membership.max_violation) + ")");
        }
        const double residual = sup_distance(next, current);
        if (!report.residuals.empty() && report.residuals.back() > 0.0) {
            report.empirical_ratios.push_back(residual / report.residuals.back());
        }
        report.residuals.push_back(residual);
        report.iterations = n + 1;
        report.a_posteriori_bound = a_posteriori_bound(gamma, residual);
        current = std::move(next);
        if (report.a_posteriori_bound <= stop_tol) {
            report.converged = true;
            break;
        }
    }
    report.solution = current;
    if (!report.converged) throw IterationLimitReached(std::move(report));
    return report;
}

/// Solve from the default starting point erf on the default grid.
inline IterationReport solve(double delta, double stop_tol,
                             std::size_t max_iter = kDefaultMaxIterations) {
    const auto params = OperatorParams::make(delta, stop_tol / 100.0);
    return solve(params, erf_grid(params.x_max), stop_tol, max_iter);
}

/// Fixed-point defect ||tau(h) - h||.
inline double residual_of(const GridFunction& candidate, const OperatorParams& params) {
    return sup_distance(apply_tau(candidate, params), candidate);
}

}  // namespace moderf
