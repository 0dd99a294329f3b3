// Compare the guaranteed contraction modulus g(delta) with ratios observed
// on random pairs of admissible functions.

#include <algorithm>
#include <cstdio>

#include "moderf/moderf.hpp"

int main() {
    const auto b = moderf::find_delta1(1e-12);
    std::printf("delta_1 in [%.12f, %.12f]\n\n", b.lo, b.hi);

    moderf::Rng rng(1);
    std::printf("%6s %12s %14s\n", "delta", "g(delta)", "worst ratio");
    for (double delta : {0.02, 0.05, 0.1, 0.15, 0.2}) {
        const auto params = moderf::OperatorParams::make(delta, 1e-11);
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const auto h1 = moderf::random_member_of_K(rng, params.x_max);
            const auto h2 = moderf::random_member_of_K(rng, params.x_max);
            worst = std::max(worst, moderf::empirical_contraction_ratio(h1, h2, params));
        }
        std::printf("%6.2f %12.6f %14.6f\n", delta, moderf::g_of(delta), worst);
    }
    return 0;
}
