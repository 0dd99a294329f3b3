#pragma once

// Contraction modulus g, its unit crossing delta_1, and the auxiliary
// estimates behind it as executable checks.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "moderf/errors.hpp"
#include "moderf/function_space.hpp"
#include "moderf/quadrature.hpp"
#include "moderf/tau_operator.hpp"

namespace moderf {

/// g(x) = (x/2) (1+x)^{3/2} (3+x) [1 + (1+x)^{3/2}]
inline double g_of(double x) {
    if (!std::isfinite(x) || x < 0.0) throw DomainError("g_of requires finite x >= 0");
    const double p = std::pow(1.0 + x, 1.5);
    return 0.5 * x * p * (3.0 + x) * (1.0 + p);
}

struct Delta1Bracket {
    double lo = 0.0;
    double hi = 1.0;
    double width() const noexcept { return hi - lo; }
};

/// Bisection for the unique positive root of g(x) = 1. g(0) = 0 and g(1) > 1
/// give the starting bracket; the result satisfies g(lo) < 1 < g(hi).
inline Delta1Bracket find_delta1(double tol) {
    if (!(tol > 0.0)) throw InvalidArgument("find_delta1 requires tol > 0");
    Delta1Bracket b{0.0, 1.0};
    while (b.width() > tol) {
        const double mid = 0.5 * (b.lo + b.hi);
        if (mid <= b.lo || mid >= b.hi) break;  // bracket at floating-point resolution
        const double g = g_of(mid);
        if (g < 1.0) {
            b.lo = mid;
        } else if (g > 1.0) {
            b.hi = mid;
        } else {
            // g rounds to exactly 1 on a few ulps around the root; step out of that plateau.
            b.lo = b.hi = mid;
            while (g_of(b.lo) >= 1.0) b.lo = std::nextafter(b.lo, 0.0);
            while (g_of(b.hi) <= 1.0) b.hi = std::nextafter(b.hi, 1.0);
            break;
        }
    }
    return b;
}

/// Lower end of a tight delta_1 bracket; the largest delta the solver accepts
/// is strictly below this.
inline double delta1_lower() {
    static const double lo = find_delta1(1e-15).lo;
    return lo;
}

struct ContractionCertificate {
    double delta = 0.0;
    double g_value = 0.0;
    Delta1Bracket delta1_bracket;
    bool is_contractive = false;
};

inline ContractionCertificate certify(double delta, double bracket_tol = 1e-12) {
    ContractionCertificate cert;
    cert.delta = delta;
    cert.g_value = g_of(delta);
    cert.delta1_bracket = find_delta1(bracket_tol);
    cert.is_contractive = cert.g_value < 1.0;
    return cert;
}

/// One side-by-side comparison lhs <= rhs.
struct BoundCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
    double slack = 0.0;  // rhs - lhs
};

inline BoundCheck make_bound_check(double lhs, double rhs, double tolerance) {
    return {lhs, rhs, lhs <= rhs + tolerance, rhs - lhs};
}

namespace detail {

inline std::vector<double> union_knots(const GridFunction& a, const GridFunction& b) {
    std::vector<double> knots;
    knots.reserve(a.size() + b.size());
    std::merge(a.xs().begin(), a.xs().end(), b.xs().begin(), b.xs().end(),
               std::back_inserter(knots));
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    return knots;
}

inline double lemma_cutoff(double delta, double quad_tol) {
    return semi_infinite_cutoff(quad_tol, 1.0 + delta, 1.0);
}

inline void check_delta_and_x(double delta, double x) {
    if (!std::isfinite(delta) || delta < 0.0) throw DomainError("delta must be finite and >= 0");
    if (!std::isfinite(x) || x < 0.0) throw DomainError("x must be finite and >= 0");
}

}  // namespace detail

/// int_0^x |k(h1) - k(h2)| <= (sqrt(pi)/4) delta sqrt(1+delta) (3+delta) ||h1 - h2||,
/// where k(h) is the outer integrand exp(-2 int xi/psi_h) / psi_h.
inline BoundCheck check_lemma_a(const GridFunction& h1, const GridFunction& h2, double delta,
                                double x, double quad_tol) {
    detail::check_delta_and_x(delta, x);
    const detail::TauKernel k1(h1, delta, quad_tol);
    const detail::TauKernel k2(h2, delta, quad_tol);
    // Beyond the cutoff both integrands are below quad_tol/4 in total.
    const double upper = std::min(x, detail::lemma_cutoff(delta, quad_tol));
    const auto knots = detail::union_knots(h1, h2);
    const auto r = integrate_finite(
        [&](double eta) { return std::abs(k1.integrand(eta) - k2.integrand(eta)); }, 0.0, upper,
        quad_tol, knots);
    const double rhs = 0.25 * std::sqrt(std::numbers::pi) * delta * std::sqrt(1.0 + delta) *
                       (3.0 + delta) * sup_distance(h1, h2);
    return make_bound_check(r.value, rhs, 10.0 * quad_tol + r.error_estimate);
}

/// |C_h1 - C_h2| <= (1/sqrt(pi)) delta sqrt(1+delta) (1+delta)^2 (3+delta) ||h1 - h2||
inline BoundCheck check_lemma_b(const GridFunction& h1, const GridFunction& h2, double delta,
                                double quad_tol) {
    detail::check_delta_and_x(delta, 0.0);
    const OperatorParams p1{delta, quad_tol, h1.x_max(), 1e-8};
    const OperatorParams p2{delta, quad_tol, h2.x_max(), 1e-8};
    const double c1 = compute_C(h1, p1);
    const double c2 = compute_C(h2, p2);
    const double lhs = std::abs(c1 - c2);
    const double rhs = delta * std::sqrt(1.0 + delta) * (1.0 + delta) * (1.0 + delta) *
                       (3.0 + delta) * sup_distance(h1, h2) / std::sqrt(std::numbers::pi);
    // C ~ 1, so its absolute error is of the order of the quadrature tolerance.
    return make_bound_check(lhs, rhs, 10.0 * quad_tol);
}

/// int_0^x k(h) <= sqrt(pi (1+delta)) / 2
inline BoundCheck check_lemma_c(const GridFunction& h, double delta, double x, double quad_tol) {
    detail::check_delta_and_x(delta, x);
    const detail::TauKernel k(h, delta, quad_tol);
    const double upper = std::min(x, detail::lemma_cutoff(delta, quad_tol));
    const auto r = integrate_finite([&k](double eta) { return k.integrand(eta); }, 0.0, upper,
                                    quad_tol, detail::interior_knots(h));
    const double rhs = 0.5 * std::sqrt(std::numbers::pi * (1.0 + delta));
    return make_bound_check(r.value, rhs, 10.0 * quad_tol + r.error_estimate);
}

/// sqrt(pi) / (2 (1+delta)) <= 1 / C_h
inline BoundCheck check_C_lower_bound(const GridFunction& h, double delta, double quad_tol) {
    detail::check_delta_and_x(delta, 0.0);
    const OperatorParams params{delta, quad_tol, h.x_max(), 1e-8};
    const double lhs = 0.5 * std::sqrt(std::numbers::pi) / (1.0 + delta);
    return make_bound_check(lhs, 1.0 / compute_C(h, params), 10.0 * quad_tol);
}

/// ||tau(h1) - tau(h2)|| / ||h1 - h2||
inline double empirical_contraction_ratio(const GridFunction& h1, const GridFunction& h2,
                                          const OperatorParams& params) {
    const double d = sup_distance(h1, h2);
    if (d < 10.0 * params.quad_tol) {
        throw DegenerateInput("inputs are too close for a contraction ratio (distance " +
                              std::to_string(d) + ")");
    }
    return sup_distance(apply_tau(h1, params), apply_tau(h2, params)) / d;
}

}  // namespace moderf
