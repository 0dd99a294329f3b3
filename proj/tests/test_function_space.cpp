#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "moderf/function_space.hpp"
#include "moderf/random_functions.hpp"
#include "oracles.hpp"

using namespace moderf;

namespace {

GridFunction erf_on_0_6() {
    return sample([](double x) { return std::erf(x); }, uniform_nodes(6.0, 0.01), 1.0);
}

GridFunction from_function(double (*f)(double), double x_max, double tail) {
    return sample(f, uniform_nodes(x_max, 0.01), tail);
}

}  // namespace

TEST(UniformNodes, EndsExactlyAtXMax) {
    const auto xs = uniform_nodes(5.7, 1.0 / 256);
    EXPECT_EQ(xs.front(), 0.0);
    EXPECT_EQ(xs.back(), 5.7);
    EXPECT_TRUE(std::is_sorted(xs.begin(), xs.end()));
    EXPECT_EQ(uniform_nodes(1.0, 0.25).size(), 5u);
}

TEST(DefaultXMax, GaussianBelowThreshold) {
    for (double delta : {0.0, 0.1, 0.2}) {
        const double xm = default_x_max(delta);
        EXPECT_NEAR(std::exp(-xm * xm / (1.0 + delta)), 1e-14, 1e-20);
    }
}

TEST(GridFunction, RejectsMalformedNodes) {
    EXPECT_THROW(GridFunction({0.0}, {0.0}, 1.0), InvalidArgument);
    EXPECT_THROW(GridFunction({0.1, 1.0}, {0.0, 1.0}, 1.0), InvalidArgument);
    EXPECT_THROW(GridFunction({0.0, 1.0, 1.0}, {0.0, 0.5, 1.0}, 1.0), InvalidArgument);
    EXPECT_THROW(GridFunction({0.0, 1.0}, {0.0, NAN}, 1.0), InvalidArgument);
    EXPECT_THROW(GridFunction({0.0, 1.0}, {0.0, 1.0}, INFINITY), InvalidArgument);
    EXPECT_THROW(GridFunction({0.0, 1.0}, {0.0, 1.0}, 1.0, {1.0}), InvalidArgument);
}

TEST(Evaluate, ErfGridExamples) {
    const auto h = erf_on_0_6();
    EXPECT_EQ(evaluate(h, 0.0), 0.0);
    EXPECT_EQ(evaluate(h, 100.0), 1.0);
    // Reference: erf(1) by quadrature of 2/sqrt(pi) exp(-z^2).
    const double erf1 = oracle::erf_by_quadrature(1.0);
    EXPECT_NEAR(erf1, 0.8427007929497149, 1e-15);
    EXPECT_NEAR(evaluate(h, 1.0), erf1, 1e-12);
}

TEST(Evaluate, DomainErrors) {
    const auto h = erf_on_0_6();
    EXPECT_THROW(evaluate(h, -1e-9), DomainError);
    EXPECT_THROW(evaluate(h, NAN), DomainError);
    EXPECT_THROW(evaluate(h, INFINITY), DomainError);
}

TEST(Evaluate, ExactSlopesGiveHighAccuracy) {
    const auto h = erf_grid(6.0);
    double worst = 0.0;
    for (double x = 0.0; x <= 6.0; x += 1e-3) worst = std::max(worst, std::abs(h(x) - std::erf(x)));
    EXPECT_LT(worst, 1e-11);
}

TEST(Evaluate, MonotoneDataNeverOvershoots) {
    Rng rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        const auto h = random_K_function(rng, 5.0, 1.0 / 64);
        const auto& xs = h.xs();
        for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
            double prev = h.values()[k];
            for (int j = 1; j <= 16; ++j) {
                const double v = h(xs[k] + (xs[k + 1] - xs[k]) * j / 16.0);
                ASSERT_GE(v, prev - 1e-15);
                prev = v;
            }
        }
    }
}

TEST(Evaluate, ClipsInconsistentSlopes) {
    // Slopes pointing the wrong way are zeroed; the result stays in range.
    const GridFunction h({0.0, 1.0, 2.0}, {0.0, 0.5, 1.0}, 1.0, {-5.0, 10.0, 0.0});
    for (double x = 0.0; x <= 2.0; x += 0.01) {
        EXPECT_GE(h(x), -1e-15);
        EXPECT_LE(h(x), 1.0 + 1e-15);
    }
}

TEST(SupDistance, Identity) {
    const auto h = erf_on_0_6();
    EXPECT_EQ(sup_distance(h, h), 0.0);
}

TEST(SupDistance, ZeroVersusRamp) {
    const auto zero = GridFunction({0.0, 2.0}, {0.0, 0.0}, 0.0);
    const auto ramp = ramp_grid(2.0, 0.25);
    EXPECT_DOUBLE_EQ(sup_distance(zero, ramp), 1.0);
    const auto half = GridFunction({0.0, 1.0}, {0.0, 0.5}, 0.5);
    EXPECT_DOUBLE_EQ(sup_distance(zero, half), 0.5);
}

TEST(SupDistance, DifferentGridsAndTails) {
    const auto a = sample([](double x) { return std::erf(x); }, uniform_nodes(4.0, 0.1), 1.0);
    const auto b = sample([](double x) { return std::erf(x); }, uniform_nodes(6.0, 0.013), 1.0);
    // Triangle inequality through erf, with each interpolation error scanned densely.
    double err_a = 0.0, err_b = 0.0;
    for (double x = 0.0; x <= 8.0; x += 1e-4) {
        err_a = std::max(err_a, std::abs(a(x) - std::erf(x)));
        err_b = std::max(err_b, std::abs(b(x) - std::erf(x)));
    }
    const double d = sup_distance(a, b);
    EXPECT_GT(d, 0.0);
    EXPECT_LE(d, err_a + err_b);
    EXPECT_LT(err_a, 1e-3);
    const auto c = GridFunction({0.0, 1.0}, {0.0, 0.9}, 0.9);
    EXPECT_NEAR(sup_distance(c, GridFunction({0.0, 1.0}, {0.0, 0.9}, 1.0)), 0.1, 1e-15);
}

TEST(SupDistance, IsAPseudometric) {
    Rng rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const auto a = random_member_of_K(rng, 5.0, 1.0 / 32);
        const auto b = random_member_of_K(rng, 5.0, 1.0 / 32);
        const auto c = random_member_of_K(rng, 5.0, 1.0 / 32);
        const double ab = sup_distance(a, b);
        EXPECT_GE(ab, 0.0);
        EXPECT_EQ(ab, sup_distance(b, a));
        EXPECT_LE(sup_distance(a, c), ab + sup_distance(b, c) + 1e-15);
    }
}

TEST(KMembership, ErfIsInK) {
    const auto r = check_K_membership(erf_on_0_6(), 1e-9);
    EXPECT_TRUE(r.in_K);
    EXPECT_TRUE(r.violated_conditions.empty());
    EXPECT_TRUE(check_K_membership(erf_grid(6.0), 0.0).in_K);
}

TEST(KMembership, ZeroFunctionFailsTheLimit) {
    const auto r = check_K_membership(constant_grid(0.0, 5.0), 1e-9);
    EXPECT_FALSE(r.in_K);
    EXPECT_DOUBLE_EQ(r.max_violation, 1.0);
    ASSERT_EQ(r.violated_conditions.size(), 1u);
    EXPECT_EQ(r.violated_conditions[0], KCondition::limit_value);
}

TEST(KMembership, OvershootAboveOne) {
    const auto h = from_function([](double x) { return std::min(1.05, x); }, 3.0, 1.0);
    const auto r = check_K_membership(h, 1e-9);
    EXPECT_FALSE(r.in_K);
    EXPECT_NEAR(r.max_violation, 0.05, 1e-12);
    ASSERT_EQ(r.violated_conditions.size(), 1u);
    EXPECT_EQ(r.violated_conditions[0], KCondition::bound_above);
}

TEST(KMembership, NegativeValuesAndOrigin) {
    const GridFunction h({0.0, 1.0, 2.0}, {0.2, -0.1, 1.0}, 1.0);
    const auto r = check_K_membership(h, 1e-9);
    EXPECT_FALSE(r.in_K);
    EXPECT_NE(std::find(r.violated_conditions.begin(), r.violated_conditions.end(),
                        KCondition::bound_below),
              r.violated_conditions.end());
    EXPECT_NE(std::find(r.violated_conditions.begin(), r.violated_conditions.end(),
                        KCondition::origin_value),
              r.violated_conditions.end());
    // The report is consistent with its tolerance.
    EXPECT_TRUE(check_K_membership(h, r.max_violation).in_K);
}

TEST(KMembership, RandomMembersAreInK) {
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        EXPECT_TRUE(check_K_membership(random_member_of_K(rng, 5.7), 1e-12).in_K);
    }
}

TEST(Csv, RoundTripsNodeValues) {
    const auto h = erf_on_0_6();
    std::stringstream buf;
    write_csv(buf, h);
    const std::string text = buf.str();
    EXPECT_EQ(text.rfind("# x_max=6, tail=1\nx,value\n0,0\n", 0), 0u);
    const auto back = read_csv(buf);
    EXPECT_EQ(back.xs(), h.xs());
    EXPECT_EQ(back.values(), h.values());
    EXPECT_EQ(back.tail_value(), h.tail_value());
}

TEST(Csv, RejectsMissingMetadata) {
    std::stringstream no_comment("x,value\n0,0\n1,1\n");
    EXPECT_THROW(read_csv(no_comment), InvalidArgument);
    std::stringstream bad_header("# x_max=1, tail=1\nx,y\n0,0\n1,1\n");
    EXPECT_THROW(read_csv(bad_header), InvalidArgument);
    std::stringstream mismatch("# x_max=2, tail=1\nx,value\n0,0\n1,1\n");
    EXPECT_THROW(read_csv(mismatch), InvalidArgument);
}
