#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "test_support.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int status;
    std::string output;
};

Result run(const std::string& args) {
    const std::string cmd = std::string(PBVI_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    std::string out;
    std::array<char, 4096> buf;
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("pbvi_cli_" + std::to_string(::getpid()) + "_" +
                                            ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string tmp(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, SolveWritesPolicyAndStats) {
    const auto r = run("solve " + pbvi::test::data_path("tiger.pomdp") + " --method vi1 --policy-out " +
                       tmp("t.policy") + " --stats-out " + tmp("t.json"));
    ASSERT_EQ(r.status, 0) << r.output;
    EXPECT_NE(r.output.find("tiger method=vi1 standard_updates="), std::string::npos);
    std::ifstream stats(tmp("t.json"));
    const auto j = nlohmann::json::parse(stats);
    EXPECT_LE(j["stats"]["standard_update_count"].get<int>(), 6);
    EXPECT_EQ(j["policy_file"], tmp("t.policy"));
    EXPECT_EQ(pbvi::test::read_text(tmp("t.policy")).rfind("# pomdp-policy v1", 0), 0u);
}

TEST_F(Cli, SolveIsDeterministic) {
    const std::string base = "solve " + pbvi::test::data_path("tiger.pomdp") + " --stats-out " + tmp("s.json");
    ASSERT_EQ(run(base + " --policy-out " + tmp("a.policy")).status, 0);
    ASSERT_EQ(run(base + " --policy-out " + tmp("b.policy")).status, 0);
    EXPECT_EQ(pbvi::test::read_text(tmp("a.policy")), pbvi::test::read_text(tmp("b.policy")));
}

TEST_F(Cli, MalformedModelExitsWithLocation) {
    std::ofstream(tmp("bad.pomdp")) << "discount: 0.9\nstates: 2\nactions: 1\nobservations: 1\nT: 0 bogus\n";
    const auto r = run("solve " + tmp("bad.pomdp") + " --policy-out " + tmp("x") + " --stats-out " + tmp("y"));
    EXPECT_EQ(r.status, 2) << r.output;
    EXPECT_NE(r.output.find("bad.pomdp:5:"), std::string::npos) << r.output;
}

TEST_F(Cli, BadArgumentsExitTwo) {
    EXPECT_EQ(run("solve " + pbvi::test::data_path("tiger.pomdp") + " --epsilon -1").status, 2);
    EXPECT_EQ(run("solve " + pbvi::test::data_path("tiger.pomdp") + " --method magic").status, 2);
    EXPECT_EQ(run("solve " + tmp("missing.pomdp")).status, 2);
}

TEST_F(Cli, EvalOneState) {
    ASSERT_EQ(run("solve " + pbvi::test::data_path("one_state.pomdp") + " --policy-out " + tmp("p") +
                  " --stats-out " + tmp("s"))
                  .status,
              0);
    const auto r = run("eval --model " + pbvi::test::data_path("one_state.pomdp") + " --policy " + tmp("p") +
                       " --trials 50");
    ASSERT_EQ(r.status, 0) << r.output;
    std::istringstream fields(r.output);
    std::string key;
    double estimate = 0.0;
    fields >> key >> estimate;
    EXPECT_EQ(key, "estimate");
    EXPECT_NEAR(estimate, 2.0, 1e-5);
    EXPECT_NE(r.output.find("analytic 2"), std::string::npos) << r.output;
}

TEST_F(Cli, EvalRejectsMismatchedPolicy) {
    ASSERT_EQ(run("solve " + pbvi::test::data_path("one_state.pomdp") + " --policy-out " + tmp("p") +
                  " --stats-out " + tmp("s"))
                  .status,
              0);
    EXPECT_EQ(run("eval --model " + pbvi::test::data_path("tiger.pomdp") + " --policy " + tmp("p")).status, 2);
}

TEST_F(Cli, CompareSkipsMissingFiles) {
    const auto r = run("compare " + pbvi::test::data_path("zero_reward.pomdp") + " " + tmp("nope.pomdp") +
                       " --report-out " + tmp("r.json"));
    ASSERT_EQ(r.status, 0) << r.output;
    EXPECT_NE(r.output.find("warning"), std::string::npos);
    EXPECT_NE(r.output.find("Quality ratio"), std::string::npos);
    std::ifstream in(tmp("r.json"));
    const auto j = nlohmann::json::parse(in);
    ASSERT_EQ(j["problems"].size(), 1u);
    EXPECT_EQ(j["problems"][0]["vi"]["stats"]["standard_update_count"], 1);
    EXPECT_EQ(run("compare " + tmp("nope.pomdp")).status, 2);
}
