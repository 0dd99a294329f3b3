// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "moderf/moderf.hpp"
#include "oracles.hpp"

using namespace moderf;

namespace {

struct Outcome {
    bool ok;
    std::string detail;
};

int failures = 0;

void report(int id, const char* title, double limit_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > limit_s) {
        out.ok = false;
        out.detail += " (over time limit)";
    }
    if (!out.ok) ++failures;
    std::printf("%s  criterion %d  %-32s %7.2fs / %3.0fs  %s\n", out.ok ? "PASS" : "FAIL", id, title,
                secs, limit_s, out.detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

}  // namespace

int main() {
    report(1, "delta_1 bracket", 1.0, [] {
        const auto b = find_delta1(1e-6);
        const bool ok = b.lo >= 0.203701 && b.hi <= 0.203702 && b.width() <= 1e-6;
        return Outcome{ok, fmt("[%.9f, %.9f]", b.lo, b.hi)};
    });

    report(2, "delta = 0 reduces to erf", 5.0, [] {
        const auto r = solve(0.0, 1e-10);
        double worst = 0.0;
        for (int i = 0; i <= 6000; ++i) {
            const double x = 1e-3 * i;
            worst = std::max(worst, std::abs(r.solution(x) - oracle::erf_by_quadrature(x)));
        }
        return Outcome{worst <= 1e-8, fmt("sup |y - erf| on [0,6] = %.3e", worst)};
    });

    report(3, "fixed point matches shooting", 60.0, [] {
        double worst = 0.0;
        for (double delta : {0.05, 0.1, 0.2}) {
            const auto r = solve(delta, 1e-9);
            worst = std::max(worst, compare_solutions(delta, r.solution, 1e-9, 1e-10));
        }
        return Outcome{worst <= 1e-6, fmt("max sup-distance = %.3e", worst)};
    });

    report(4, "contraction ratio below g", 120.0, [] {
        const bool g_ok = std::abs(g_of(0.1) - 0.3851267) <= 1e-6;
        double worst_margin = INFINITY;
        std::size_t pairs = 0;
        Rng rng(20240101);
        for (double delta : {0.05, 0.1, 0.2}) {
            const auto params = OperatorParams::make(delta, 1e-12);
            const double g = g_of(delta);
            for (int i = 0; i < 100; ++i) {
                const auto h1 = random_member_of_K(rng, params.x_max);
                const auto h2 = random_member_of_K(rng, params.x_max);
                if (sup_distance(h1, h2) < 10.0 * params.quad_tol) continue;
                worst_margin = std::min(worst_margin, g + 1e-6 - empirical_contraction_ratio(h1, h2, params));
                ++pairs;
            }
        }
        return Outcome{g_ok && pairs == 300 && worst_margin >= 0.0,
                       fmt("g(0.1) = %.9f, %g pairs, min margin %.3e", g_of(0.1),
                           static_cast<double>(pairs), worst_margin)};
    });

    report(5, "randomized bound checks", 300.0, [] {
        VerificationConfig config;
        config.seed = 0;
        config.trials = 500;
        config.delta_max = 0.2;
        config.tol = 1e-8;
        const auto r = run_verification(config);
        double min_slack = INFINITY;
        std::size_t failed = 0;
        for (const auto& [name, s] : r.checks) {
            min_slack = std::min(min_slack, s.min_slack);
            failed += s.failed;
        }
        return Outcome{r.all_passed(), fmt("min slack %.3e, %g failed checks", min_slack,
                                           static_cast<double>(failed))};
    });

    report(6, "a-posteriori bound is honest", 30.0, [] {
        const auto params = OperatorParams::make(0.1, 1e-12);
        const auto r = solve(params, erf_grid(params.x_max), 1e-10);
        GridFunction h = r.solution;
        double worst = 0.0;
        for (int k = 0; k < 20; ++k) {
            h = apply_tau(h, params);
            worst = std::max(worst, sup_distance(h, r.solution));
        }
        return Outcome{worst <= r.a_posteriori_bound,
                       fmt("max movement %.3e <= bound %.3e", worst, r.a_posteriori_bound)};
    });

    std::printf("%s: %d criteria failed\n", failures ? "FAILED" : "ALL PASSED", failures);
    return failures ? 1 : 0;
}
