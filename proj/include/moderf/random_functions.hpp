#pragma once

// Seedable generators of members of K for randomized property trials.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "moderf/function_space.hpp"

namespace moderf {

using Rng = std::mt19937_64;

namespace detail {

inline double uniform(Rng& rng, double lo, double hi) {
    // generate_canonical keeps the stream independent of distribution state.
    return lo + (hi - lo) * std::generate_canonical<double, 53>(rng);
}

}  // namespace detail

/// Monotone member of K: cumulative sums of non-negative random increments at
/// a handful of random knots, normalised to reach 1 at a random end point,
/// interpolated monotonically and resampled on the standard grid.
inline GridFunction random_K_function(Rng& rng, double x_max, double spacing = kDefaultSpacing) {
    const int knots = 2 + static_cast<int>(detail::uniform(rng, 0.0, 23.0));
    const double x_end = detail::uniform(rng, 0.3, x_max);

    std::vector<double> xs{0.0};
    for (int i = 0; i < knots - 1; ++i) xs.push_back(detail::uniform(rng, 0.0, x_end));
    xs.push_back(x_end);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    std::vector<double> ys(xs.size(), 0.0);
    for (std::size_t i = 1; i < xs.size(); ++i) {
        // Some increments are zero so that flat stretches occur.
        const double step = detail::uniform(rng, 0.0, 1.0) < 0.2 ? 0.0 : detail::uniform(rng, 0.0, 1.0);
        ys[i] = ys[i - 1] + step;
    }
    if (ys.back() <= 0.0) ys.back() = 1.0;
    const double scale = ys.back();
    for (double& y : ys) y /= scale;
    ys.back() = 1.0;

    const GridFunction coarse(xs, ys, 1.0);
    return sample([&coarse](double x) { return std::clamp(coarse(x), 0.0, 1.0); },
                  uniform_nodes(x_max, spacing), 1.0);
}

/// erf(s x) with a random rate s in [0.6, 3]; smooth, strictly increasing.
inline GridFunction random_erf_like(Rng& rng, double x_max, double spacing = kDefaultSpacing) {
    const double s = detail::uniform(rng, 0.6, 3.0);
    return sample([s](double x) { return std::erf(s * x); }, uniform_nodes(x_max, spacing), 1.0,
                  [s](double x) { return 2.0 * s / std::sqrt(std::numbers::pi) * std::exp(-s * s * x * x); });
}

/// Draws from a mix of the two families above.
inline GridFunction random_member_of_K(Rng& rng, double x_max, double spacing = kDefaultSpacing) {
    if (detail::uniform(rng, 0.0, 1.0) < 0.25) return random_erf_like(rng, x_max, spacing);
    return random_K_function(rng, x_max, spacing);
}

}  // namespace moderf
