#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

namespace {

struct Run {
    int code;
    std::string out;
};

// stdout only; stderr is discarded so diagnostics never leak into parsed output.
Run run(const std::string& args) {
    const std::string cmd = std::string(MODERF_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, {}};
    std::string out;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

}  // namespace

TEST(Cli, EvalDeltaZeroIsErf) {
    const auto r = run("eval --delta 0 --x 1");
    ASSERT_EQ(r.code, 0);
    EXPECT_NEAR(std::stod(r.out), std::erf(1.0), 1e-10);
    EXPECT_NE(r.out.find("+/-"), std::string::npos);
}

TEST(Cli, EvalPointOne) {
    const auto r = run("eval --delta 0.1 --x 1 --tol 1e-10");
    ASSERT_EQ(r.code, 0);
    const double y = std::stod(r.out);
    EXPECT_GT(y, 0.0);
    EXPECT_LT(y, 1.0);
    const double bound = std::stod(r.out.substr(r.out.find("+/-") + 3));
    EXPECT_LE(bound, 1e-10);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run("eval --delta 0.25 --x 1").code, 2);
    EXPECT_EQ(run("eval --delta -0.1 --x 1").code, 2);
    EXPECT_EQ(run("eval --delta 0.1 --x -1").code, 1);
    EXPECT_EQ(run("eval --x 1").code, 1);
    EXPECT_EQ(run("nonsense").code, 1);
    EXPECT_EQ(run("").code, 1);
    EXPECT_EQ(run("table --delta 0.1 --step 0").code, 1);
    EXPECT_EQ(run("verify --delta-max 0.3 --trials 1").code, 2);
}

TEST(Cli, OutOfRangeTableWritesNothing) {
    const auto r = run("table --delta 0.3 --x-min 0 --x-max 1 --step 0.5");
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(r.out.empty());
}

TEST(Cli, TableRowCountAndMonotonicity) {
    const auto r = run("table --delta 0.1 --x-min 0 --x-max 3 --step 0.25 --tol 1e-9");
    ASSERT_EQ(r.code, 0);
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 1u + 13u);
    EXPECT_EQ(rows[0], "x,y");
    double prev = -1.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double y = std::stod(rows[i].substr(rows[i].find(',') + 1));
        EXPECT_GE(y, prev);
        prev = y;
    }
    EXPECT_EQ(rows[1], "0,0");
}

TEST(Cli, TableJson) {
    const auto r = run("table --delta 0.05 --x-min 0.5 --x-max 1 --step 0.1 --format json");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(j.size(), 6u);
    EXPECT_DOUBLE_EQ(j[0]["x"].get<double>(), 0.5);
}

TEST(Cli, Delta1IsDeterministicAndBracketsThreshold) {
    const auto a = run("delta1 --tol 1e-6");
    const auto b = run("delta1 --tol 1e-6");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    const auto rows = lines(a.out);
    ASSERT_EQ(rows.size(), 2u);
    const double lo = std::stod(rows[1]);
    const double hi = std::stod(rows[1].substr(rows[1].find(',') + 1));
    EXPECT_GE(lo, 0.203701);
    EXPECT_LE(hi, 0.203702);
    EXPECT_LE(hi - lo, 1e-6);

    const auto j = nlohmann::json::parse(run("delta1 --tol 1e-6 --format json").out);
    EXPECT_EQ(j["lo"].get<double>(), lo);
}

TEST(Cli, VerifyReportIsDeterministic) {
    const auto a = run("verify --seed 7 --trials 6");
    const auto b = run("verify --seed 7 --trials 6");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    const auto j = nlohmann::json::parse(a.out);
    EXPECT_TRUE(j["all_passed"].get<bool>());
    EXPECT_EQ(j["checks"]["lemma_b"]["evaluated"], 6);
}

TEST(Cli, VerifyZeroTrials) {
    const auto r = run("verify --trials 0");
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(nlohmann::json::parse(r.out)["all_passed"].get<bool>());
}

TEST(Cli, Compare) {
    const auto r = run("compare --delta 0.1");
    ASSERT_EQ(r.code, 0);
    EXPECT_LE(std::stod(r.out), 1e-6);
    EXPECT_EQ(run("compare --delta 0.1 --max-distance 1e-30").code, 4);
    EXPECT_EQ(run("compare --delta 0.21").code, 2);
}
