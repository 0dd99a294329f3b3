#pragma once

// Adaptive Gauss-Kronrod (10/21) integration on finite intervals, plus a
// truncated variant for semi-infinite integrands with Gaussian decay.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "moderf/errors.hpp"

namespace moderf {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;  // absolute, >= 0
    std::size_t evaluations = 0;
};

/// Hard cap on integrand evaluations for a single integral.
inline constexpr std::size_t kMaxEvaluations = 1'000'000;

namespace detail {

// Kronrod abscissae; odd indices are the 10-point Gauss nodes.
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525800450, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
    double a = 0.0;
    double b = 0.0;
    double value = 0.0;
    double error = 0.0;
    double resabs = 0.0;
};

inline bool operator<(const Panel& lhs, const Panel& rhs) { return lhs.error < rhs.error; }

// One 21-point Kronrod panel with the QUADPACK error heuristic.
template <class F>
Panel gk21(F& f, double a, double b) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double uflow = std::numeric_limits<double>::min();

    const double centr = 0.5 * (a + b);
    const double hlgth = 0.5 * (b - a);

    std::array<double, 10> fv1{};
    std::array<double, 10> fv2{};

    const double fc = f(centr);
    double resg = 0.0;
    double resk = kWgk[10] * fc;
    double resabs = std::abs(resk);

    for (std::size_t j = 0; j < 10; ++j) {
        const double absc = hlgth * kXgk[j];
        const double f1 = f(centr - absc);
        const double f2 = f(centr + absc);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += kWgk[j] * (f1 + f2);
        resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }

    const double reskh = 0.5 * resk;
    double resasc = kWgk[10] * std::abs(fc - reskh);
    for (std::size_t j = 0; j < 10; ++j) {
        resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
    }

    Panel p{a, b, resk * hlgth, 0.0, resabs * std::abs(hlgth)};
    resasc *= std::abs(hlgth);
    double abserr = std::abs((resk - resg) * hlgth);
    if (resasc != 0.0 && abserr != 0.0) {
        abserr = resasc * std::min(1.0, std::pow(200.0 * abserr / resasc, 1.5));
    }
    if (p.resabs > uflow / (50.0 * eps)) {
        abserr = std::max(50.0 * eps * p.resabs, abserr);
    }
    p.error = abserr;
    if (!std::isfinite(p.value)) {
        throw DomainError("integrand is not finite on [" + std::to_string(a) + ", " +
                          std::to_string(b) + "]");
    }
    return p;
}

inline constexpr std::size_t kEvalsPerPanel = 21;

}  // namespace detail

/// Adaptive integration of f over [a, b], starting from the panels cut at
/// `breakpoints` (points outside (a, b) are ignored). Knots of a piecewise
/// integrand belong in `breakpoints`.
template <class F>
QuadratureResult integrate_finite(F&& f, double a, double b, double abs_tol,
                                  std::span<const double> breakpoints) {
    if (!std::isfinite(a) || !std::isfinite(b)) {
        throw InvalidInterval("integration bounds must be finite");
    }
    if (a > b) {
        throw InvalidInterval("integration bounds reversed: a > b");
    }
    if (!(abs_tol > 0.0)) {
        throw InvalidArgument("abs_tol must be positive");
    }
    if (a == b) {
        const double fa = f(a);
        if (!std::isfinite(fa)) throw DomainError("integrand is not finite at a");
        return {0.0, 0.0, 1};
    }

    std::vector<double> cuts;
    cuts.reserve(breakpoints.size() + 2);
    cuts.push_back(a);
    for (double c : breakpoints) {
        if (c > a && c < b) cuts.push_back(c);
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const std::size_t initial_panels = cuts.size() - 1;
    if (initial_panels * detail::kEvalsPerPanel > kMaxEvaluations) {
        throw NonConvergence("too many breakpoints for the evaluation budget");
    }

    std::vector<detail::Panel> heap;
    heap.reserve(initial_panels + 16);
    std::size_t evaluations = 0;
    double total_err = 0.0;
    double total_abs = 0.0;
    for (std::size_t i = 0; i < initial_panels; ++i) {
        heap.push_back(detail::gk21(f, cuts[i], cuts[i + 1]));
        evaluations += detail::kEvalsPerPanel;
        total_err += heap.back().error;
        total_abs += heap.back().resabs;
    }
    std::make_heap(heap.begin(), heap.end());

    constexpr double eps = std::numeric_limits<double>::epsilon();
    const auto target = [&] { return std::max(abs_tol, 100.0 * eps * total_abs); };

    while (total_err > target()) {
        if (evaluations + 2 * detail::kEvalsPerPanel > kMaxEvaluations) {
            throw NonConvergence("quadrature evaluation budget exhausted (error " +
                                 std::to_string(total_err) + " > tol " +
                                 std::to_string(abs_tol) + ")");
        }
        std::pop_heap(heap.begin(), heap.end());
        const detail::Panel worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw NonConvergence("quadrature panel width reached floating-point resolution");
        }
        const detail::Panel left = detail::gk21(f, worst.a, mid);
        const detail::Panel right = detail::gk21(f, mid, worst.b);
        evaluations += 2 * detail::kEvalsPerPanel;
        total_err += left.error + right.error - worst.error;
        total_abs += left.resabs + right.resabs - worst.resabs;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end());
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end());
    }

    // Re-sum from the panels so the running updates leave no drift.
    std::sort(heap.begin(), heap.end(),
              [](const detail::Panel& l, const detail::Panel& r) { return l.a < r.a; });
    QuadratureResult out;
    for (const auto& p : heap) {
        out.value += p.value;
        out.error_estimate += p.error;
    }
    out.evaluations = evaluations;
    return out;
}

template <class F>
QuadratureResult integrate_finite(F&& f, double a, double b, double abs_tol) {
    return integrate_finite(std::forward<F>(f), a, b, abs_tol, std::span<const double>{});
}

/// Truncation point for a semi-infinite integrand bounded by
/// bound * exp(-x^2 / decay_scale).
inline double semi_infinite_cutoff(double abs_tol, double decay_scale, double bound = 2.0) {
    return std::sqrt(decay_scale * std::log(4.0 * bound / abs_tol));
}

/// Integral over [0, inf) of an integrand with |f(x)| <= bound * exp(-x^2/decay_scale).
/// The domain is cut at semi_infinite_cutoff() and the analytic tail bound
/// is added to the error estimate.
template <class F>
QuadratureResult integrate_semi_infinite(F&& f, double abs_tol, double decay_scale,
                                         std::span<const double> breakpoints = {},
                                         double bound = 2.0) {
    if (!(abs_tol > 0.0)) throw InvalidArgument("abs_tol must be positive");
    if (!(decay_scale > 0.0) || !std::isfinite(decay_scale)) {
        throw InvalidArgument("decay_scale must be positive and finite");
    }
    if (!(bound > 0.0) || bound > 2.0) {
        throw InvalidArgument("decay bound must lie in (0, 2]");
    }
    const double x_cut = semi_infinite_cutoff(abs_tol, decay_scale, bound);
    const double root_s = std::sqrt(decay_scale);
    const double tail = bound * 0.5 * std::sqrt(std::numbers::pi) * root_s *
                        std::erfc(x_cut / root_s);
    auto result = integrate_finite(std::forward<F>(f), 0.0, x_cut, 0.5 * abs_tol, breakpoints);
    result.error_estimate += tail;
    return result;
}

}  // namespace moderf
