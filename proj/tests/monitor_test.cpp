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

#include "akv/monitor.hpp"

#include <gtest/gtest.h>

namespace akv::checker {
namespace {

tlogic::Formula f(const char* text) {
  auto r = tlogic::parse(text);
  EXPECT_TRUE(r) << text;
  return *r;
}

Verdict run(const char* text, std::vector<trace::Snapshot> snaps) {
  return monitor_trace(f(text), snaps);
}

TEST(Monitor, StartsInconclusive) {
  EXPECT_EQ(new_monitor(f("G p")).verdict, Outcome::kInconclusive);
  EXPECT_EQ(new_monitor(f("F p")).verdict, Outcome::kInconclusive);
  auto m = monitor_step(new_monitor(f("p")), {"p"});
  EXPECT_EQ(m.verdict, Outcome::kSatisfied);
  EXPECT_EQ(m.decided_at, 0u);
  m = monitor_step(new_monitor(f("p")), {});
  EXPECT_EQ(m.verdict, Outcome::kViolated);
}

TEST(Monitor, SafetyViolation) {
  auto v = run("G !bad", {{}, {}, {"bad"}, {}});
  EXPECT_EQ(v.outcome, Outcome::kViolated);
  EXPECT_EQ(v.step, 2u);
}

TEST(Monitor, UnvalidatedInvokeFlaggedAtItsStep) {
  const char* hp9 = "G(invoked_ee(shadow) -> vm_ok(shadow))";
  auto v = run(hp9, {{"vm_ok(cat)"}, {"invoked_ee(cat)", "vm_ok(cat)"}, {}, {"invoked_ee(shadow)"}});
  EXPECT_EQ(v.outcome, Outcome::kViolated);
  EXPECT_EQ(v.step, 3u);
}

TEST(Monitor, ResponseSatisfiesAtItsStep) {
  auto v = run("F resp_sent", {{"req_received"}, {"dag_built"}, {}, {"resp_sent"}, {}});
  EXPECT_EQ(v.outcome, Outcome::kSatisfied);
  EXPECT_EQ(v.step, 3u);
}

TEST(Monitor, StrongFinalization) {
  EXPECT_EQ(run("G p", {{"p"}, {"p"}}).outcome, Outcome::kSatisfied);
  EXPECT_EQ(run("F q", {{"p"}, {"p"}}).outcome, Outcome::kViolated);
  EXPECT_EQ(run("p U q", {{"p"}, {"p"}}).outcome, Outcome::kViolated);
  EXPECT_EQ(run("X p", {{"p"}}).outcome, Outcome::kViolated);
  EXPECT_EQ(run("X !p", {{"p"}}).outcome, Outcome::kViolated);
  // Duals under negation: !F q is G !q, met at the end.
  EXPECT_EQ(run("!(F q)", {{"p"}, {"p"}}).outcome, Outcome::kSatisfied);
  EXPECT_EQ(run("!(G p)", {{"p"}, {"p"}}).outcome, Outcome::kViolated);
  auto v = run("G(req -> F resp)", {{"req"}, {}, {}});
  EXPECT_EQ(v.outcome, Outcome::kViolated);
  EXPECT_EQ(v.step, 2u);
  EXPECT_NE(v.detail.find("F(resp)"), std::string::npos);
}

TEST(Monitor, Impartial) {
  auto m = monitor_step(new_monitor(f("G !bad")), {"bad"});
  ASSERT_EQ(m.verdict, Outcome::kViolated);
  m = monitor_step(m, {});
  m = monitor_step(m, {"good"});
  EXPECT_EQ(m.verdict, Outcome::kViolated);
  EXPECT_EQ(m.decided_at, 0u);
  EXPECT_EQ(monitor_finalize(m).outcome, Outcome::kViolated);
}

TEST(Monitor, UntilAndNext) {
  EXPECT_EQ(run("p U q", {{"p"}, {"p"}, {"q"}}).outcome, Outcome::kSatisfied);
  EXPECT_EQ(run("p U q", {{"p"}, {}, {"q"}}).outcome, Outcome::kViolated);
  EXPECT_EQ(run("X p", {{}, {"p"}}).outcome, Outcome::kSatisfied);
  EXPECT_EQ(run("X X p", {{}, {"p"}, {}}).outcome, Outcome::kViolated);
  EXPECT_EQ(run("G(a -> X b)", {{"a"}, {"b"}, {}, {"a"}, {"b"}}).outcome, Outcome::kSatisfied);
  EXPECT_EQ(run("G(a -> X b)", {{"a"}, {}, {"b"}}).step, 1u);
}

TEST(Monitor, ObligationsDoNotPileUp) {
  auto m = new_monitor(f("G(req -> F resp)"));
  for (int i = 0; i < 200; ++i) m = monitor_step(m, {"req"});
  EXPECT_EQ(m.verdict, Outcome::kInconclusive);
  EXPECT_LT(m.residual.depth(), 6u);
  m = monitor_step(m, {"resp"});
  EXPECT_EQ(monitor_finalize(m).outcome, Outcome::kSatisfied);
}

TEST(Monitor, Progression) {
  EXPECT_EQ(tlogic::render(progress(f("G p"), {"p"})), "G(p)");
  EXPECT_EQ(tlogic::render(progress(f("F p"), {})), "F(p)");
  EXPECT_EQ(tlogic::render(progress(f("X q"), {})), "q");
  EXPECT_EQ(progress(f("F p"), {"p"}).op(), tlogic::Op::kTrue);
}

}  // namespace
}  // namespace akv::checker
