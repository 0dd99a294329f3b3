// moderf: command-line front end for the modified error function library.
//
//   moderf eval    --delta D --x X [--tol T]
//   moderf table   --delta D --x-min A --x-max B --step S [--tol T] [--format csv|json]
//   moderf delta1  [--tol T] [--format csv|json]
//   moderf verify  [--seed N] [--trials N] [--delta-max D] [--tol T]
//   moderf compare --delta D [--tol T] [--max-distance E]
//
// Exit codes: 0 ok, 1 usage error, 2 delta out of range, 3 non-convergence,
// 4 a verification or comparison check failed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "moderf/moderf.hpp"

namespace {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kDeltaOutOfRange = 2,
    kNonConvergence = 3,
    kCheckFailed = 4,
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("moderf");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    const char* level = std::getenv("MODERF_LOG");
    const std::string value = level ? level : "error";
    if (value == "debug") {
        spdlog::set_level(spdlog::level::debug);
    } else if (value == "info") {
        spdlog::set_level(spdlog::level::info);
    } else {
        spdlog::set_level(spdlog::level::err);
    }
}

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw moderf::InvalidArgument(std::string(name) + " must be positive");
    }
}

moderf::IterationReport run_solve(double delta, double tol) {
    require_positive(tol, "--tol");
    spdlog::info("solving delta={} stop_tol={}", delta, tol);
    auto report = moderf::solve(delta, tol);
    spdlog::info("converged in {} iterations, a-posteriori bound {}", report.iterations,
                 report.a_posteriori_bound);
    for (std::size_t i = 0; i < report.residuals.size(); ++i) {
        spdlog::debug("step {} residual {}", i + 1, report.residuals[i]);
    }
    return report;
}

int cmd_eval(double delta, double x, double tol) {
    if (!std::isfinite(x) || x < 0.0) throw moderf::DomainError("--x must be finite and >= 0");
    const auto report = run_solve(delta, tol);
    std::cout << num(report.solution(x)) << " +/- " << num(report.a_posteriori_bound) << "\n";
    return kOk;
}

int cmd_table(double delta, double x_min, double x_max, double step, double tol,
              const std::string& format) {
    require_positive(step, "--step");
    if (!(x_min >= 0.0) || !(x_max >= x_min) || !std::isfinite(x_max)) {
        throw moderf::InvalidArgument("need 0 <= --x-min <= --x-max");
    }
    const auto rows = static_cast<std::size_t>(std::floor((x_max - x_min) / step + 1e-9)) + 1;
    const auto report = run_solve(delta, tol);

    // Buffered so that nothing is printed if evaluation fails midway.
    std::ostringstream out;
    if (format == "json") {
        nlohmann::json table = nlohmann::json::array();
        for (std::size_t i = 0; i < rows; ++i) {
            const double x = x_min + static_cast<double>(i) * step;
            table.push_back({{"x", x}, {"y", report.solution(x)}});
        }
        out << table.dump(2) << "\n";
    } else {
        out << "x,y\n";
        for (std::size_t i = 0; i < rows; ++i) {
            const double x = x_min + static_cast<double>(i) * step;
            out << num(x) << "," << num(report.solution(x)) << "\n";
        }
    }
    std::cout << out.str();
    return kOk;
}

int cmd_delta1(double tol, const std::string& format) {
    require_positive(tol, "--tol");
    const auto b = moderf::find_delta1(tol);
    if (format == "json") {
        std::cout << moderf::to_json(b).dump() << "\n";
    } else {
        std::cout << "lo,hi\n" << num(b.lo) << "," << num(b.hi) << "\n";
    }
    return kOk;
}

int cmd_verify(std::uint64_t seed, std::size_t trials, double delta_max, double tol) {
    moderf::VerificationConfig config;
    config.seed = seed;
    config.trials = trials;
    config.delta_max = delta_max;
    config.tol = tol;
    spdlog::info("verify: {} trials, seed {}, delta_max {}", trials, seed, delta_max);
    const auto report = moderf::run_verification(config);
    std::cout << moderf::to_json(report).dump(2) << "\n";
    return report.all_passed() ? kOk : kCheckFailed;
}

int cmd_compare(double delta, double tol, double max_distance) {
    const auto report = run_solve(delta, tol);
    const double step_tol = std::min(moderf::kDefaultStepTol, tol);
    const double d = moderf::compare_solutions(delta, report.solution, tol, step_tol);
    spdlog::info("sup-distance {} (threshold {})", d, max_distance);
    std::cout << num(d) << "\n";
    return d <= max_distance ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();

    CLI::App app{"Modified error function: fixed-point solver, certificates and oracle"};
    app.require_subcommand(1);

    double delta = 0.0;
    double x = 0.0;
    double tol = 1e-10;
    double x_min = 0.0;
    double x_max = 3.0;
    double step = 0.1;
    std::string format = "csv";
    std::uint64_t seed = 0;
    std::size_t trials = 100;
    double delta_max = 0.2;
    double max_distance = 1e-6;

    auto* eval = app.add_subcommand("eval", "Evaluate y(x) with its a-posteriori error bound");
    eval->add_option("--delta", delta, "Parameter delta")->required();
    eval->add_option("--x", x, "Evaluation point (>= 0)")->required();
    eval->add_option("--tol", tol, "Stopping tolerance of the fixed-point iteration");

    auto* table = app.add_subcommand("table", "Tabulate y on a uniform grid");
    table->add_option("--delta", delta, "Parameter delta")->required();
    table->add_option("--x-min", x_min, "First abscissa");
    table->add_option("--x-max", x_max, "Last abscissa");
    table->add_option("--step", step, "Grid step (> 0)");
    table->add_option("--tol", tol, "Stopping tolerance of the fixed-point iteration");
    table->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));

    double delta1_tol = 1e-6;
    std::string delta1_format = "csv";
    auto* d1 = app.add_subcommand("delta1", "Bracket the contraction threshold delta_1");
    d1->add_option("--tol", delta1_tol, "Bracket width");
    d1->add_option("--format", delta1_format, "Output format")->check(CLI::IsMember({"csv", "json"}));

    double verify_tol = 1e-8;
    auto* verify = app.add_subcommand("verify", "Randomized certification of the contraction estimates");
    verify->add_option("--seed", seed, "Random seed");
    verify->add_option("--trials", trials, "Number of random trials");
    verify->add_option("--delta-max", delta_max, "Largest delta sampled");
    verify->add_option("--tol", verify_tol, "Allowed negative slack per check");

    double compare_tol = 1e-9;
    auto* compare = app.add_subcommand("compare", "Compare the fixed point with the shooting oracle");
    compare->add_option("--delta", delta, "Parameter delta")->required();
    compare->add_option("--tol", compare_tol, "Solver tolerances");
    compare->add_option("--max-distance", max_distance, "Largest acceptable sup-distance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*eval) return cmd_eval(delta, x, tol);
        if (*table) return cmd_table(delta, x_min, x_max, step, tol, format);
        if (*d1) return cmd_delta1(delta1_tol, delta1_format);
        if (*verify) return cmd_verify(seed, trials, delta_max, verify_tol);
        if (*compare) return cmd_compare(delta, compare_tol, max_distance);
    } catch (const moderf::DeltaOutOfRange& e) {
        spdlog::error("{}", e.what());
        return kDeltaOutOfRange;
    } catch (const moderf::NonConvergence& e) {
        spdlog::error("{}", e.what());
        return kNonConvergence;
    } catch (const moderf::Error& e) {
        spdlog::error("{}", e.what());
        return kUsage;
    }
    return kUsage;
}
