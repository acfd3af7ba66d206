/* Copyright 2026 The ctxattack Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ctxattack/config.hpp"
#include "ctxattack/remote_target.hpp"
#include "gtest/gtest.h"
#include "replay_server.hpp"

namespace ctxattack {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int exit_code = -1;
  std::string output;
};

fs::path scratch() {
  static int counter = 0;
  const fs::path p = fs::temp_directory_path() /
                     ("ctxattack-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CliRun cli(const std::string& args) {
  const fs::path log = scratch() / "out.txt";
  const std::string cmd = std::string(CTXATTACK_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  CliRun r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.output = slurp(log);
  fs::remove_all(log.parent_path());
  return r;
}

const std::string kDemo = CTXATTACK_DEMO_DIR;

TEST(CliTest, AttackWritesRunDirectory) {
  const fs::path out = scratch() / "run";
  const CliRun r = cli("attack --config " + kDemo + "/config.json --dataset " + kDemo +
                    "/reviews.jsonl --backend-suite stub --out " + out.string());
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("Original Acc"), std::string::npos);
  for (const char* f : {"config.json", "results.jsonl", "metrics.json", "report.txt", "report.csv",
                        "adversarial.jsonl"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  fs::remove_all(out.parent_path());
}

TEST(CliTest, MissingDatasetLeavesNoRunDirectory) {
  const fs::path out = scratch() / "run";
  const CliRun r = cli("attack --dataset /nonexistent/d.jsonl --out " + out.string());
  EXPECT_NE(r.exit_code, 0);
  EXPECT_FALSE(fs::exists(out));
  fs::remove_all(out.parent_path());
}

TEST(CliTest, UnknownConfigKeyIsUsageError) {
  const fs::path dir = scratch();
  std::ofstream(dir / "bad.json") << R"({"K": 10, "bogus_key": 1})";
  const CliRun r = cli("attack --config " + (dir / "bad.json").string() + " --dataset " + kDemo +
                    "/reviews.jsonl --out " + (dir / "run").string());
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.output.find("bogus_key"), std::string::npos) << r.output;
  EXPECT_FALSE(fs::exists(dir / "run"));
  fs::remove_all(dir);
}

TEST(CliTest, FlagsBeatConfigBeatsDefaults) {
  const fs::path dir = scratch();
  std::ofstream(dir / "cfg.json") << R"({"max_rounds": 2, "K": 12, "seed": 5})";
  const CliRun r = cli("attack --config " + (dir / "cfg.json").string() + " --dataset " + kDemo +
                    "/reviews.jsonl --max-rounds 3 --out " + (dir / "run").string());
  ASSERT_EQ(r.exit_code, 0) << r.output;
  const auto snap = nlohmann::json::parse(slurp(dir / "run" / "config.json"));
  EXPECT_EQ(snap["max_rounds"], 3);
  EXPECT_EQ(snap["K"], 12);
  EXPECT_EQ(snap["seed"], 5);
  EXPECT_EQ(snap["M"], 3);
  fs::remove_all(dir);
}

TEST(CliTest, SweepWritesOneSubRunPerValue) {
  const fs::path out = scratch() / "sweep";
  const CliRun r = cli("sweep --dataset " + kDemo + "/reviews.jsonl --axis K --values 10,20,35,50,60 --out " +
                    out.string());
  ASSERT_EQ(r.exit_code, 0) << r.output;
  for (const char* v : {"10", "20", "35", "50", "60"}) {
    EXPECT_TRUE(fs::exists(out / (std::string("K=") + v) / "results.jsonl")) << v;
  }
  EXPECT_TRUE(fs::exists(out / "comparison.txt"));
  EXPECT_NE(slurp(out / "comparison.txt").find("K=35"), std::string::npos);
  fs::remove_all(out.parent_path());
}

TEST(CliTest, HeuristicSweep) {
  const fs::path out = scratch() / "sweep";
  const CliRun r = cli("sweep --dataset " + kDemo +
                    "/reviews.jsonl --axis heuristic --values average,median,top_n,top_maxes_distance,constant --out " +
                    out.string());
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("heuristic=constant"), std::string::npos) << r.output;
  fs::remove_all(out.parent_path());
}

TEST(CliTest, InvalidAxisIsUsageError) {
  const fs::path out = scratch() / "sweep";
  const CliRun r = cli("sweep --dataset " + kDemo + "/reviews.jsonl --axis depth --values 1,2 --out " +
                    out.string());
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_FALSE(fs::exists(out));
  fs::remove_all(out.parent_path());
}

TEST(CliTest, SingleShowsBoldedSubstitution) {
  const CliRun r = cli("single --text \"We love this place, the soup is delicious.\" --label 1");
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("**delicious**"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("success"), std::string::npos);
  EXPECT_NE(r.output.find("queries:"), std::string::npos);
}

TEST(CliTest, SingleReportsFailureWithBestText) {
  const CliRun r = cli("single --text \"The food was good.\" --label 1");
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("failed"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("adversarial:"), std::string::npos);
}

TEST(CliTest, EmptyTextIsUsageError) {
  EXPECT_EQ(cli("single --text \"  \" --label 1").exit_code, 2);
}

TEST(CliTest, TargetUrlEngagesRemoteClient) {
  testing::ReplayServer server({{200, R"({"scores": [0.1, 0.9], "label": 1})"}});
  const CliRun r = cli("single --text \"The food was good.\" --label 1 --target-url " + server.url());
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_FALSE(server.requests().empty());
  EXPECT_NE(r.output.find("queries:     " + std::to_string(server.requests().size())),
            std::string::npos)
      << r.output;
}

}  // namespace
}  // namespace ctxattack
