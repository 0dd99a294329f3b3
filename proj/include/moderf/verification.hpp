#pragma once

// Randomized certification run: the auxiliary estimates, the lower bound on
// 1/C_h, invariance of K under tau and the empirical contraction ratio, each
// evaluated on seeded random members of K.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "moderf/contraction.hpp"
#include "moderf/function_space.hpp"
#include "moderf/random_functions.hpp"
#include "moderf/tau_operator.hpp"

namespace moderf {

struct VerificationConfig {
    std::uint64_t seed = 0;
    std::size_t trials = 100;
    double delta_max = 0.2;
    /// Allowed negative slack for every check; quadrature runs at tol / 100.
    double tol = 1e-8;
    unsigned threads = 0;  // 0: hardware concurrency
};

struct CheckSummary {
    std::size_t evaluated = 0;
    std::size_t failed = 0;
    double min_slack = std::numeric_limits<double>::infinity();

    void record(double slack, double tol) {
        ++evaluated;
        min_slack = std::min(min_slack, slack);
        if (slack < -tol) ++failed;
    }
};

inline const std::vector<std::string>& verification_check_names() {
    static const std::vector<std::string> names = {
        "lemma_a", "lemma_b", "lemma_c", "C_lower_bound", "K_invariance", "contraction_ratio"};
    return names;
}

struct VerificationReport {
    VerificationConfig config;
    std::map<std::string, CheckSummary> checks;
    bool all_passed() const {
        return std::all_of(checks.begin(), checks.end(),
                           [](const auto& kv) { return kv.second.failed == 0; });
    }
};

/// Slacks from one trial, keyed like verification_check_names(). A missing
/// entry means the check was not applicable (coincident random pair).
using TrialSlacks = std::map<std::string, double>;

inline TrialSlacks run_verification_trial(std::uint64_t seed, std::size_t index,
                                          double delta_max, double tol) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    Rng rng(seq);
    const double delta = delta_max * (1.0 - std::generate_canonical<double, 53>(rng));
    const double x_max = default_x_max(delta);
    const GridFunction h1 = random_member_of_K(rng, x_max);
    const GridFunction h2 = random_member_of_K(rng, x_max);
    const double x = (x_max + 1.0) * std::generate_canonical<double, 53>(rng);
    const double quad_tol = tol / 100.0;
    const auto params = OperatorParams{delta, quad_tol, x_max, tol};

    TrialSlacks out;
    out["lemma_a"] = check_lemma_a(h1, h2, delta, x, quad_tol).slack;
    out["lemma_b"] = check_lemma_b(h1, h2, delta, quad_tol).slack;
    out["lemma_c"] = check_lemma_c(h1, delta, x, quad_tol).slack;
    out["C_lower_bound"] = check_C_lower_bound(h1, delta, quad_tol).slack;

    const GridFunction t1 = apply_tau(h1, params);
    const auto membership = check_K_membership(t1, 0.0);
    double monotone_defect = 0.0;
    for (std::size_t i = 1; i < t1.size(); ++i) {
        monotone_defect = std::max(monotone_defect, t1.values()[i - 1] - t1.values()[i]);
    }
    out["K_invariance"] = -std::max(membership.max_violation, monotone_defect);

    const double d = sup_distance(h1, h2);
    if (d >= 10.0 * quad_tol) {
        const GridFunction t2 = apply_tau(h2, params);
        out["contraction_ratio"] = g_of(delta) - sup_distance(t1, t2) / d;
    }
    return out;
}

inline VerificationReport run_verification(const VerificationConfig& config) {
    if (!(config.delta_max > 0.0) || config.delta_max >= delta1_lower()) {
        throw DeltaOutOfRange("delta_max must lie in (0, delta_1)");
    }
    if (!(config.tol > 0.0)) throw InvalidArgument("tol must be positive");

    std::vector<TrialSlacks> results(config.trials);
    unsigned workers = config.threads ? config.threads : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(config.trials)));
    std::vector<std::future<void>> jobs;
    for (unsigned w = 0; w < workers; ++w) {
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < config.trials; i += workers) {
                results[i] = run_verification_trial(config.seed, i, config.delta_max, config.tol);
            }
        }));
    }
    for (auto& j : jobs) j.get();

    VerificationReport report;
    report.config = config;
    for (const auto& name : verification_check_names()) report.checks[name];
    for (const auto& trial : results) {
        for (const auto& [name, slack] : trial) report.checks[name].record(slack, config.tol);
    }
    return report;
}

inline nlohmann::json to_json(const VerificationReport& r) {
    nlohmann::json checks = nlohmann::json::object();
    for (const auto& [name, s] : r.checks) {
        checks[name] = {{"evaluated", s.evaluated},
                        {"failed", s.failed},
                        {"min_slack", s.evaluated ? nlohmann::json(s.min_slack) : nlohmann::json()}};
    }
    return {{"seed", r.config.seed},         {"trials", r.config.trials},
            {"delta_max", r.config.delta_max}, {"tol", r.config.tol},
            {"checks", std::move(checks)},    {"all_passed", r.all_passed()}};
}

}  // namespace moderf
