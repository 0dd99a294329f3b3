#pragma once

// The linearised solution operator tau. For a frozen coefficient
// psi_h = 1 + delta*h,
//
//   tau(h)(x) = C_h * int_0^x exp(-2 int_0^eta xi/psi_h(xi) dxi) / psi_h(eta) deta,
//
// with C_h normalising the integral over [0, inf) to one.

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "moderf/errors.hpp"
#include "moderf/function_space.hpp"
#include "moderf/quadrature.hpp"

namespace moderf {

struct OperatorParams {
    double delta = 0.0;
    double quad_tol = 1e-12;
    double x_max = default_x_max(0.0);
    /// Tolerance used when checking that inputs and outputs lie in K.
    double membership_tol = 1e-8;

    static OperatorParams make(double delta, double quad_tol = 1e-12) {
        return {delta, quad_tol, default_x_max(delta), 1e-8};
    }

    /// delta = 0 is accepted: it is the erf collapse case.
    void validate() const {
        if (!std::isfinite(delta) || delta < 0.0) {
            throw DeltaOutOfRange("delta must be finite and >= 0, got " + std::to_string(delta));
        }
        if (!(quad_tol > 0.0)) throw InvalidArgument("quad_tol must be positive");
        if (!(x_max > 0.0) || !std::isfinite(x_max)) throw InvalidArgument("x_max must be positive");
        if (!(membership_tol >= 0.0)) throw InvalidArgument("membership_tol must be >= 0");
    }
};

inline double psi(const GridFunction& h, double delta, double x) { return 1.0 + delta * h(x); }

namespace detail {

// Precomputed inner integrals at the nodes of h, so that the outer integrand
// costs one short panel integral per evaluation.
class TauKernel {
public:
    TauKernel(const GridFunction& h, double delta, double quad_tol)
        : h_(h), delta_(delta), quad_tol_(quad_tol), prefix_(h.size(), 0.0) {
        const auto& xs = h_.xs();
        for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
            prefix_[k + 1] = prefix_[k] + panel_inner(k, xs[k], xs[k + 1]);
        }
        psi_tail_ = 1.0 + delta_ * h_.tail_value();
        if (!(psi_tail_ > 0.0)) throw DomainError("coefficient 1 + delta*h must stay positive");
    }

    const GridFunction& function() const noexcept { return h_; }
    double delta() const noexcept { return delta_; }
    const std::vector<double>& prefix() const noexcept { return prefix_; }

    double psi_at(double x) const { return 1.0 + delta_ * h_(x); }

    /// int_0^eta xi / psi(xi) dxi
    double inner(double eta) const {
        const double xm = h_.x_max();
        if (eta >= xm) return prefix_.back() + (eta * eta - xm * xm) / (2.0 * psi_tail_);
        const std::size_t k = h_.interval_of(eta);
        const double x0 = h_.xs()[k];
        if (eta == x0) return prefix_[k];
        return prefix_[k] + panel_inner(k, x0, eta);
    }

    double integrand(double eta) const { return std::exp(-2.0 * inner(eta)) / psi_at(eta); }

    /// Integrand value at node k using the stored prefix.
    double integrand_at_node(std::size_t k) const {
        return std::exp(-2.0 * prefix_[k]) / (1.0 + delta_ * h_.values()[k]);
    }

    /// Exact integral of the integrand over [x_max, inf), where h equals its tail.
    double tail_integral() const {
        const double xm = h_.x_max();
        const double a = psi_tail_;
        const double root_a = std::sqrt(a);
        // exp(x^2/a) * erfc(x/sqrt(a)) stays finite for the x_max values in use.
        return std::exp(-2.0 * prefix_.back()) / a * 0.5 * std::sqrt(std::numbers::pi) * root_a *
               std::exp(xm * xm / a) * std::erfc(xm / root_a);
    }

private:
    double panel_inner(std::size_t k, double a, double b) const {
        auto f = [this, k](double xi) { return xi / (1.0 + delta_ * h_.evaluate_on(k, xi)); };
        const double tol = quad_tol_ * 1e-3 * (b - a);
        const Panel p = gk21(f, a, b);
        if (p.error <= tol || p.error <= 100.0 * std::numeric_limits<double>::epsilon() * p.resabs) {
            return p.value;
        }
        return integrate_finite(f, a, b, tol).value;
    }

    const GridFunction& h_;
    double delta_;
    double quad_tol_;
    std::vector<double> prefix_;
    double psi_tail_ = 1.0;
};

inline std::span<const double> interior_knots(const GridFunction& h) {
    return std::span<const double>(h.xs()).subspan(1, h.size() - 2);
}

}  // namespace detail

/// int_0^eta xi / psi_h(xi) dxi
inline double inner_integral(const GridFunction& h, double delta, double eta, double quad_tol) {
    if (!std::isfinite(eta) || eta < 0.0) throw DomainError("eta must be finite and >= 0");
    return detail::TauKernel(h, delta, quad_tol).inner(eta);
}

/// Normalising constant: the reciprocal of the outer integral over [0, inf).
inline double compute_C(const GridFunction& h, const OperatorParams& params) {
    params.validate();
    const detail::TauKernel kernel(h, params.delta, params.quad_tol);
    const auto r = integrate_semi_infinite([&kernel](double eta) { return kernel.integrand(eta); },
                                           params.quad_tol, 1.0 + params.delta,
                                           detail::interior_knots(h), 1.0);
    return 1.0 / r.value;
}

/// tau(h) on the nodes of h, with exact node slopes and tail value 1.
inline GridFunction apply_tau(const GridFunction& h, const OperatorParams& params) {
    params.validate();
    const auto membership = check_K_membership(h, params.membership_tol);
    if (!membership.in_K) {
        throw KViolation("tau applied outside K (max violation " +
                         std::to_string(membership.max_violation) + ")");
    }

    const detail::TauKernel kernel(h, params.delta, params.quad_tol);
    const auto& xs = h.xs();
    const std::size_t n = xs.size();
    const double span = h.x_max();

    std::vector<double> cumulative(n, 0.0);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double tol = 0.5 * params.quad_tol * (xs[k + 1] - xs[k]) / span;
        const auto r = integrate_finite([&kernel](double eta) { return kernel.integrand(eta); },
                                        xs[k], xs[k + 1], tol);
        cumulative[k + 1] = cumulative[k] + r.value;
    }
    const double total = cumulative.back() + kernel.tail_integral();
    const double c = 1.0 / total;

    std::vector<double> values(n);
    std::vector<double> slopes(n);
    for (std::size_t k = 0; k < n; ++k) {
        values[k] = cumulative[k] * c;
        slopes[k] = c * kernel.integrand_at_node(k);
    }
    return GridFunction(xs, std::move(values), 1.0, std::move(slopes));
}

}  // namespace moderf
