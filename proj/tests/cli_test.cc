// Copyright 2026 The PGLP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "pglp/pglp.hpp"

namespace {

namespace fs = std::filesystem;
using pglp::io::Json;

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("pglp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  RunResult run(const std::string& args) {
    const fs::path out = dir_ / "stdout.txt";
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd = std::string(PGLP_CLI_PATH) + " " + args + " > " + out.string() +
                            " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
  }

  static std::string data(const std::string& name) {
    return std::string(PGLP_SAMPLE_DATA) + "/" + name;
  }

  fs::path dir_;
};

TEST_F(CliTest, EmptyTrajectoryGivesEmptyOutput) {
  const auto traj = write("empty.csv", "t,cell_index\n");
  const auto r = run("--map " + data("map_5x5.json") + " --policy " + data("policy_g1.json") +
                     " release --trajectory " + traj);
  EXPECT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(r.out, "");
}

TEST_F(CliTest, ReleaseIsDeterministicAndOmitsTruth) {
  const std::string args = "--map " + data("map_5x5.json") + " --policy " +
                           data("policy_k25.json") + " --seed 77 release --trajectory " +
                           data("trajectory.csv");
  const auto a = run(args);
  const auto b = run(args);
  ASSERT_EQ(a.exit_code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  std::istringstream lines(a.out);
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) {
    const Json rec = Json::parse(line);
    EXPECT_FALSE(rec.contains("truth"));
    EXPECT_TRUE(rec.contains("released"));
    ++n;
  }
  EXPECT_EQ(n, 5);
  const auto c = run("--map " + data("map_5x5.json") + " --policy " + data("policy_k25.json") +
                     " --seed 78 release --trajectory " + data("trajectory.csv"));
  EXPECT_NE(a.out, c.out);
}

TEST_F(CliTest, LedgerSummary) {
  const auto ledger = (dir_ / "ledger.json").string();
  const auto r = run("--map " + data("map_5x5.json") + " --policy " + data("policy_g1.json") +
                     " --epsilon 0.25 release --trajectory " + data("trajectory.csv") +
                     " --ledger " + ledger);
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const Json j = Json::parse(slurp(ledger));
  EXPECT_EQ(j["releases"], 5);
  EXPECT_NEAR(j["total_epsilon"].get<double>(), 1.25, 1e-12);
}

TEST_F(CliTest, TruthOutsideSupportIsModelInconsistency) {
  const auto markov = write("sink.json", R"({"n": 6, "rows": [[1,0,0,0,0,0],[1,0,0,0,0,0],
    [1,0,0,0,0,0],[1,0,0,0,0,0],[1,0,0,0,0,0],[1,0,0,0,0,0]]})");
  const auto traj = write("t.csv", "t,cell_index\n1,0\n2,5\n");
  const auto r = run("--map " + data("map_2x3.json") + " --policy " + data("policy_fig.json") +
                     " release --trajectory " + traj + " --markov " + markov);
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_EQ(Json::parse(r.err)["code"], "model-inconsistency");
}

TEST_F(CliTest, DetectFullDomainHasNoDisconnectedNodes) {
  const auto r = run("--map " + data("map_5x5.json") + " --policy " + data("policy_g1.json") + " detect");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_TRUE(Json::parse(r.out)["disconnected"].empty());
}

TEST_F(CliTest, DetectListsTheDisconnectedNode) {
  const auto r = run("--map " + data("map_2x3.json") + " --policy " + data("policy_fig.json") +
                     " detect --domain " + data("domain_fig.json"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["disconnected"], Json::array({4}));
  EXPECT_FALSE(j.contains("repairs"));
}

TEST_F(CliTest, RepairMatchesLibrary) {
  const auto r = run("--map " + data("map_2x3.json") + " --policy " + data("policy_fig.json") +
                     " repair --domain " + data("domain_fig.json"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const Json j = Json::parse(r.out);

  const auto map = pglp::io::map_from_json(pglp::io::read_json(data("map_2x3.json")));
  const auto g = pglp::io::policy_from_json(pglp::io::read_json(data("policy_fig.json")), map);
  const auto c = pglp::io::domain_from_json(pglp::io::read_json(data("domain_fig.json")), map.size());
  const auto report = pglp::analyze_and_repair(map, g, c);
  ASSERT_EQ(j["repairs"].size(), report.repairs.size());
  EXPECT_EQ(j["repairs"][0]["edge"][0], report.repairs[0].edge.u);
  EXPECT_EQ(j["repairs"][0]["edge"][1], report.repairs[0].edge.v);
}

TEST_F(CliTest, UnrepairableExitCode) {
  const auto domain = write("d.json", R"({"members": [4]})");
  const auto r = run("--map " + data("map_2x3.json") + " --policy " + data("policy_fig.json") +
                     " repair --domain " + domain);
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_EQ(Json::parse(r.err)["code"], "unrepairable");
}

TEST_F(CliTest, ExperimentMinimalConfig) {
  const auto cfg = write("exp.json", R"({"map": {"width": 10, "height": 10},
    "policies": [{"builder": "block", "k": 5}], "mechanisms": ["ppim"], "epsilons": [1.0],
    "repetitions": 2, "users": 2, "timestamps": 5})");
  const auto a = run("--seed 3 experiment --config " + cfg);
  ASSERT_EQ(a.exit_code, 0) << a.err;
  EXPECT_EQ(a.out.substr(0, a.out.find('\n')), "policy,mechanism,epsilon,metric,mean,stderr,runtime_ms");
  EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 3);
  EXPECT_EQ(run("--seed 3 experiment --config " + cfg).out, a.out);
}

TEST_F(CliTest, ExperimentMissingPolicyFile) {
  const auto cfg = write("exp.json", R"({"map": {"width": 4, "height": 4},
    "policies": ["missing_policy.json"]})");
  const auto r = run("experiment --config " + cfg);
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_EQ(Json::parse(r.err)["code"], "config");
}

TEST_F(CliTest, UsageErrors) {
  auto r = run("");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_EQ(Json::parse(r.err)["code"], "usage");
  r = run("--epsilon -1 detect");
  EXPECT_EQ(r.exit_code, 1);
  r = run("--mechanism laplace --map " + data("map_5x5.json") + " --policy " +
          data("policy_g1.json") + " detect");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_EQ(Json::parse(r.err)["code"], "config");
  r = run("detect");
  EXPECT_EQ(r.exit_code, 1);
}

TEST_F(CliTest, SimulateThenLearn) {
  const auto traj = (dir_ / "sim.csv").string();
  auto r = run("--map " + data("map_5x5.json") + " --seed 4 --out " + traj + " simulate --length 200");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(pglp::io::trajectory_from_csv(slurp(traj), 25).size(), 200u);
  r = run("--map " + data("map_5x5.json") + " learn-markov --trajectory " + traj);
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto m = pglp::io::markov_from_json(Json::parse(r.out));
  EXPECT_EQ(m.size(), 25u);
}

}  // namespace
