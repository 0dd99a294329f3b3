#pragma once

// Sampled functions on a truncated half-line [0, x_max] with a constant
// tail beyond x_max. These are the computable stand-ins for elements of the
// bounded-function space and the candidate set K.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <istream>
#include <iterator>
#include <limits>
#include <locale>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "moderf/errors.hpp"

namespace moderf {

/// Default node spacing for every grid built by the library.
inline constexpr double kDefaultSpacing = 1.0 / 256.0;

/// Smallest x with exp(-x^2/(1+delta)) < 1e-14.
inline double default_x_max(double delta) {
    return std::sqrt((1.0 + delta) * std::log(1e14));
}

/// Uniform nodes 0, s, 2s, ... plus a final node exactly at x_max.
inline std::vector<double> uniform_nodes(double x_max, double spacing = kDefaultSpacing) {
    if (!(x_max > 0.0) || !std::isfinite(x_max)) throw InvalidArgument("x_max must be positive");
    if (!(spacing > 0.0) || spacing > x_max) throw InvalidArgument("bad node spacing");
    const auto full = static_cast<std::size_t>(std::floor(x_max / spacing));
    std::vector<double> xs;
    xs.reserve(full + 2);
    for (std::size_t i = 0; i <= full; ++i) xs.push_back(static_cast<double>(i) * spacing);
    // Drop a node that would leave a sliver panel in front of x_max.
    if (x_max - xs.back() < 1e-3 * spacing) xs.pop_back();
    xs.push_back(x_max);
    return xs;
}

/// Piecewise cubic Hermite function on [0, x_max] with constant tail.
///
/// Node slopes are either supplied (exact derivative data, e.g. from the
/// fixed-point operator or an ODE solve) or estimated by the
/// Fritsch-Butland/PCHIP rule. Supplied slopes are limited per node so that
/// every interval with monotone data stays monotone.
class GridFunction {
public:
    GridFunction(std::vector<double> xs, std::vector<double> values, double tail_value,
                 std::vector<double> slopes = {})
        : xs_(std::move(xs)), ys_(std::move(values)), ds_(std::move(slopes)), tail_(tail_value) {
        validate();
        if (ds_.empty()) {
            ds_ = pchip_slopes(xs_, ys_);
        } else {
            limit_slopes();
        }
    }

    double x_max() const noexcept { return xs_.back(); }
    double tail_value() const noexcept { return tail_; }
    std::size_t size() const noexcept { return xs_.size(); }
    const std::vector<double>& xs() const noexcept { return xs_; }
    const std::vector<double>& values() const noexcept { return ys_; }
    const std::vector<double>& slopes() const noexcept { return ds_; }

    /// |last node value - tail value|: how far the truncation is from the limit.
    double truncation_defect() const noexcept { return std::abs(ys_.back() - tail_); }

    double operator()(double x) const {
        if (!std::isfinite(x) || x < 0.0) {
            throw DomainError("GridFunction evaluated at invalid x = " + std::to_string(x));
        }
        if (x > xs_.back()) return tail_;
        auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
        std::size_t k = static_cast<std::size_t>(it - xs_.begin());
        k = (k == 0) ? 0 : k - 1;
        if (k >= xs_.size() - 1) k = xs_.size() - 2;
        return hermite(k, x);
    }

    /// Interval index containing x (x in [0, x_max]).
    std::size_t interval_of(double x) const {
        auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
        std::size_t k = static_cast<std::size_t>(it - xs_.begin());
        k = (k == 0) ? 0 : k - 1;
        return std::min(k, xs_.size() - 2);
    }

    /// Evaluate on a known interval; skips the search.
    double evaluate_on(std::size_t k, double x) const { return hermite(k, x); }

private:
    double hermite(std::size_t k, double x) const {
        const double h = xs_[k + 1] - xs_[k];
        const double t = (x - xs_[k]) / h;
        const double t2 = t * t;
        const double t3 = t2 * t;
        const double h00 = 2 * t3 - 3 * t2 + 1;
        const double h10 = t3 - 2 * t2 + t;
        const double h01 = -2 * t3 + 3 * t2;
        const double h11 = t3 - t2;
        return h00 * ys_[k] + h10 * h * ds_[k] + h01 * ys_[k + 1] + h11 * h * ds_[k + 1];
    }

    void validate() const {
        if (xs_.size() < 2) throw InvalidArgument("GridFunction needs at least two nodes");
        if (xs_.size() != ys_.size()) throw InvalidArgument("node/value size mismatch");
        if (!ds_.empty() && ds_.size() != xs_.size()) {
            throw InvalidArgument("node/slope size mismatch");
        }
        if (xs_.front() != 0.0) throw InvalidArgument("first node must be at x = 0");
        for (std::size_t i = 1; i < xs_.size(); ++i) {
            if (!(xs_[i] > xs_[i - 1])) throw InvalidArgument("nodes must be strictly increasing");
        }
        for (std::size_t i = 0; i < xs_.size(); ++i) {
            if (!std::isfinite(xs_[i]) || !std::isfinite(ys_[i])) {
                throw InvalidArgument("node data must be finite");
            }
            if (!ds_.empty() && !std::isfinite(ds_[i])) {
                throw InvalidArgument("node slopes must be finite");
            }
        }
        if (!std::isfinite(tail_)) throw InvalidArgument("tail value must be finite");
    }

    static double sign(double v) { return (v > 0.0) - (v < 0.0); }

    static std::vector<double> pchip_slopes(const std::vector<double>& x,
                                            const std::vector<double>& y) {
        const std::size_t n = x.size();
        std::vector<double> h(n - 1);
        std::vector<double> m(n - 1);
        for (std::size_t k = 0; k + 1 < n; ++k) {
            h[k] = x[k + 1] - x[k];
            m[k] = (y[k + 1] - y[k]) / h[k];
        }
        std::vector<double> d(n, 0.0);
        if (n == 2) {
            d[0] = d[1] = m[0];
            return d;
        }
        for (std::size_t k = 1; k + 1 < n; ++k) {
            if (m[k - 1] * m[k] <= 0.0) continue;
            const double w1 = 2 * h[k] + h[k - 1];
            const double w2 = h[k] + 2 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / m[k - 1] + w2 / m[k]);
        }
        const auto endpoint = [](double h0, double h1, double m0, double m1) {
            double d0 = ((2 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
            if (sign(d0) != sign(m0)) {
                d0 = 0.0;
            } else if (sign(m0) != sign(m1) && std::abs(d0) > 3 * std::abs(m0)) {
                d0 = 3 * m0;
            }
            return d0;
        };
        d[0] = endpoint(h[0], h[1], m[0], m[1]);
        d[n - 1] = endpoint(h[n - 2], h[n - 3], m[n - 2], m[n - 3]);
        return d;
    }

    void limit_slopes() {
        const std::size_t n = xs_.size();
        for (std::size_t k = 0; k < n; ++k) {
            for (int side : {-1, 1}) {
                if ((side < 0 && k == 0) || (side > 0 && k + 1 == n)) continue;
                const std::size_t a = side < 0 ? k - 1 : k;
                const double m = (ys_[a + 1] - ys_[a]) / (xs_[a + 1] - xs_[a]);
                if (m == 0.0 || sign(ds_[k]) != sign(m)) {
                    ds_[k] = 0.0;
                } else if (std::abs(ds_[k]) > 3 * std::abs(m)) {
                    ds_[k] = 3 * m;
                }
            }
        }
    }

    std::vector<double> xs_;
    std::vector<double> ys_;
    std::vector<double> ds_;
    double tail_;
};

inline double evaluate(const GridFunction& h, double x) { return h(x); }

/// Sample f on the given nodes. `df`, when given, supplies exact slopes.
inline GridFunction sample(const std::function<double(double)>& f, std::vector<double> xs,
                           double tail_value,
                           const std::function<double(double)>& df = nullptr) {
    std::vector<double> ys(xs.size());
    std::transform(xs.begin(), xs.end(), ys.begin(), f);
    std::vector<double> ds;
    if (df) {
        ds.resize(xs.size());
        std::transform(xs.begin(), xs.end(), ds.begin(), df);
    }
    return GridFunction(std::move(xs), std::move(ys), tail_value, std::move(ds));
}

inline GridFunction erf_grid(double x_max, double spacing = kDefaultSpacing) {
    return sample([](double x) { return std::erf(x); }, uniform_nodes(x_max, spacing), 1.0,
                  [](double x) { return 2.0 / std::sqrt(std::numbers::pi) * std::exp(-x * x); });
}

/// min(x, 1) with a knot at x = 1.
inline GridFunction ramp_grid(double x_max, double spacing = kDefaultSpacing) {
    auto xs = uniform_nodes(x_max, spacing);
    if (x_max > 1.0 && !std::binary_search(xs.begin(), xs.end(), 1.0)) {
        xs.insert(std::upper_bound(xs.begin(), xs.end(), 1.0), 1.0);
    }
    std::vector<double> ys(xs.size());
    std::vector<double> ds(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        ys[i] = std::min(xs[i], 1.0);
        ds[i] = xs[i] < 1.0 ? 1.0 : 0.0;
    }
    return GridFunction(std::move(xs), std::move(ys), 1.0, std::move(ds));
}

inline GridFunction constant_grid(double value, double x_max, double spacing = kDefaultSpacing) {
    auto xs = uniform_nodes(x_max, spacing);
    std::vector<double> ys(xs.size(), value);
    std::vector<double> ds(xs.size(), 0.0);
    return GridFunction(std::move(xs), std::move(ys), value, std::move(ds));
}

/// Approximate sup-norm distance: maximum of |h1 - h2| over the union of both
/// node sets refined by midpoints, and over the tails.
inline double sup_distance(const GridFunction& h1, const GridFunction& h2) {
    std::vector<double> knots;
    knots.reserve(h1.size() + h2.size());
    std::merge(h1.xs().begin(), h1.xs().end(), h2.xs().begin(), h2.xs().end(),
               std::back_inserter(knots));
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

    double worst = std::abs(h1.tail_value() - h2.tail_value());
    const auto probe = [&](double x) { worst = std::max(worst, std::abs(h1(x) - h2(x))); };
    for (std::size_t i = 0; i < knots.size(); ++i) {
        probe(knots[i]);
        if (i + 1 < knots.size()) probe(0.5 * (knots[i] + knots[i + 1]));
    }
    return worst;
}

enum class KCondition { bound_below, bound_above, origin_value, limit_value };

inline const char* to_string(KCondition c) {
    switch (c) {
        case KCondition::bound_below: return "bound_below";
        case KCondition::bound_above: return "bound_above";
        case KCondition::origin_value: return "origin_value";
        case KCondition::limit_value: return "limit_value";
    }
    return "unknown";
}

struct KMembershipReport {
    bool in_K = false;
    double max_violation = 0.0;
    std::vector<KCondition> violated_conditions;
};

/// Checks 0 <= h <= 1 on nodes and midpoints, h(0) = 0 and h(+inf) = 1.
inline KMembershipReport check_K_membership(const GridFunction& h, double tol) {
    if (!(tol >= 0.0)) throw InvalidArgument("membership tolerance must be >= 0");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    const auto& xs = h.xs();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double v = h.values()[i];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        if (i + 1 < xs.size()) {
            const double vm = h.evaluate_on(i, 0.5 * (xs[i] + xs[i + 1]));
            lo = std::min(lo, vm);
            hi = std::max(hi, vm);
        }
    }
    lo = std::min(lo, h.tail_value());
    hi = std::max(hi, h.tail_value());

    const std::pair<KCondition, double> defects[] = {
        {KCondition::bound_below, std::max(0.0, -lo)},
        {KCondition::bound_above, std::max(0.0, hi - 1.0)},
        {KCondition::origin_value, std::abs(h.values().front())},
        {KCondition::limit_value, std::abs(h.tail_value() - 1.0)},
    };
    KMembershipReport report;
    for (const auto& [cond, amount] : defects) {
        report.max_violation = std::max(report.max_violation, amount);
        if (amount > tol) report.violated_conditions.push_back(cond);
    }
    report.in_K = report.max_violation <= tol;
    return report;
}

// CSV layout:
//   # x_max=<x_max>, tail=<tail>
//   x,value
//   <x>,<value>
//   ...
inline void write_csv(std::ostream& os, const GridFunction& h) {
    std::ostringstream buf;
    buf.imbue(std::locale::classic());
    buf.precision(17);
    buf << "# x_max=" << h.x_max() << ", tail=" << h.tail_value() << "\n";
    buf << "x,value\n";
    for (std::size_t i = 0; i < h.size(); ++i) {
        buf << h.xs()[i] << "," << h.values()[i] << "\n";
    }
    os << buf.str();
}

inline GridFunction read_csv(std::istream& is) {
    std::string line;
    double tail = std::numeric_limits<double>::quiet_NaN();
    double x_max = tail;
    std::vector<double> xs;
    std::vector<double> ys;
    bool header_seen = false;
    const auto parse = [](const std::string& s) {
        std::istringstream in(s);
        in.imbue(std::locale::classic());
        double v = 0.0;
        if (!(in >> v)) throw InvalidArgument("malformed number in CSV: '" + s + "'");
        return v;
    };
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            const auto px = line.find("x_max=");
            const auto pt = line.find("tail=");
            if (px == std::string::npos || pt == std::string::npos) {
                throw InvalidArgument("CSV comment line lacks x_max/tail");
            }
            x_max = parse(line.substr(px + 6, line.find(',', px) - (px + 6)));
            tail = parse(line.substr(pt + 5));
            continue;
        }
        if (!header_seen) {
            if (line != "x,value") throw InvalidArgument("CSV header must be 'x,value'");
            header_seen = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw InvalidArgument("CSV row lacks a comma");
        xs.push_back(parse(line.substr(0, comma)));
        ys.push_back(parse(line.substr(comma + 1)));
    }
    if (std::isnan(tail)) throw InvalidArgument("CSV lacks the '# x_max=..., tail=...' line");
    if (xs.empty() || xs.back() != x_max) {
        throw InvalidArgument("CSV x_max does not match the last node");
    }
    return GridFunction(std::move(xs), std::move(ys), tail);
}

}  // namespace moderf
