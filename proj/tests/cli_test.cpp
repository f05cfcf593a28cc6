// Copyright 2026 The akv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "run_cli.hpp"

namespace akv {
namespace {

using testing::run_cli;
using testing::slurp;

std::string tmp(const std::string& name) { return ::testing::TempDir() + name; }

bool has(const std::string& text, const std::string& part) {
  return text.find(part) != std::string::npos;
}

TEST(Cli, Run) {
  auto ok = run_cli("run nominal --trace " + tmp("cli_nominal.trace.jsonl"));
  EXPECT_EQ(ok.code, 0) << ok.out;
  EXPECT_TRUE(has(ok.out, "status Success"));
  EXPECT_TRUE(has(slurp(tmp("cli_nominal.trace.jsonl")), "\"kind\":\"RespSent\""));

  auto loop = run_cli("run circular_delegation");
  EXPECT_EQ(loop.code, 1);
  EXPECT_TRUE(has(loop.out, "tick budget 40 exhausted"));

  EXPECT_EQ(run_cli("run missing.json").code, 2);
  EXPECT_EQ(run_cli("run").code, 2);
  EXPECT_EQ(run_cli("frobnicate").code, 2);
}

TEST(Cli, Check) {
  auto range = run_cli("check nominal --props TL1..TL14 --fair on");
  EXPECT_EQ(range.code, 0) << range.out;
  EXPECT_TRUE(has(range.out, "note: TL5' stands in for TL5"));
  EXPECT_TRUE(has(range.out, "TL5' Holds"));

  auto tl5 = run_cli("check nominal --props TL5 --fair on");
  EXPECT_EQ(tl5.code, 1);
  EXPECT_TRUE(has(tl5.out, "TL5 Fails"));
  EXPECT_TRUE(has(tl5.out, "offending move: fetch RETRY_SCHEDULED -> DISPATCHING"));

  auto big = run_cli("check big --cap 10");
  EXPECT_EQ(big.code, 2);
  EXPECT_TRUE(has(big.out, "state cap 10 exceeded"));

  EXPECT_EQ(run_cli("check single --props TL99").code, 2);
  EXPECT_EQ(run_cli("check single --fair maybe").code, 2);
  EXPECT_EQ(run_cli("check nowhere").code, 2);

  auto single = run_cli("check single --props TL4 --fair off");
  EXPECT_EQ(single.code, 0) << single.out;
  EXPECT_TRUE(has(single.out, "model single: 27 states"));
}

TEST(Cli, CapFromEnvironment) {
  EXPECT_NE(run_cli("check big").code, 2);
  std::string cmd = "AKV_STATE_CAP=50 " + std::string(AKV_CLI_PATH) + " check big > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  EXPECT_EQ(WEXITSTATUS(status), 2);
}

TEST(Cli, Monitor) {
  std::string nominal = tmp("cli_mon_nominal.trace.jsonl");
  ASSERT_EQ(run_cli("run nominal --trace " + nominal).code, 0);
  auto ok = run_cli("monitor " + nominal + " --props all");
  EXPECT_EQ(ok.code, 0) << ok.out;
  EXPECT_FALSE(has(ok.out, "Violated"));

  std::string bad = tmp("cli_mon_unvalidated.trace.jsonl");
  run_cli("run unvalidated_invoke --trace " + bad);
  auto hp9 = run_cli("monitor " + bad + " --props HP9");
  EXPECT_EQ(hp9.code, 1);
  EXPECT_TRUE(has(hp9.out, "HP9 Violated at step 6"));

  std::string text = slurp(nominal);
  std::string cut = tmp("cli_mon_truncated.trace.jsonl");
  std::ofstream(cut) << text.substr(0, text.rfind("{\"seq\""));
  auto trunc = run_cli("monitor " + cut);
  EXPECT_EQ(trunc.code, 2);
  EXPECT_TRUE(has(trunc.out, "trace does not end in RespSent"));

  std::string junk = tmp("cli_mon_junk.trace.jsonl");
  std::ofstream(junk) << "{\"seq\":0,\n";
  EXPECT_EQ(run_cli("monitor " + junk).code, 2);
  EXPECT_EQ(run_cli("monitor /nonexistent.trace.jsonl").code, 2);
}

TEST(Cli, ListExplainDump) {
  auto list = run_cli("list");
  EXPECT_EQ(list.code, 0);
  int lines = 0;
  for (char c : list.out) lines += c == '\n';
  EXPECT_EQ(lines, 35);
  EXPECT_TRUE(has(list.out, "TL5'"));

  auto tl10 = run_cli("explain TL10");
  EXPECT_EQ(tl10.code, 0);
  EXPECT_TRUE(has(tl10.out, "AWAITING DEPENDENCY"));
  EXPECT_TRUE(has(tl10.out, "AF(!(state_is($v,AWAITING_DEPENDENCY)))"));
  EXPECT_EQ(run_cli("explain HP99").code, 2);

  auto dump = run_cli("dump retry_exhaustion");
  EXPECT_EQ(dump.code, 0);
  EXPECT_TRUE(has(dump.out, "\"name\": \"retry_exhaustion\""));
  std::string path = tmp("cli_dump.scenario.json");
  std::ofstream(path) << dump.out;
  EXPECT_EQ(run_cli("run " + path).code, 0);
}

TEST(Cli, SameSeedSameBytes) {
  std::string a = tmp("cli_det_a.trace.jsonl"), b = tmp("cli_det_b.trace.jsonl");
  ASSERT_EQ(run_cli("run retry_exhaustion --seed 11 --trace " + a).code, 0);
  ASSERT_EQ(run_cli("run retry_exhaustion --seed 11 --trace " + b).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
}

}  // namespace
}  // namespace akv
