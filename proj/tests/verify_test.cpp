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

#include "akv/verify.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "akv/kernel.hpp"
#include "model_report.hpp"

namespace akv::checker {
namespace {

std::string golden(const std::string& name) {
  std::ifstream in(std::string(AKV_SOURCE_DIR) + "/tests/golden/" + name);
  EXPECT_TRUE(in) << name;
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Selection all() { return *tlogic::select_properties("all"); }

Selection only(const char* sel) { return *tlogic::select_properties(sel); }

std::vector<PropertyResult> runtime(const std::string& scenario, const Selection& sel = all()) {
  auto r = check_scenario_run(*scenarios::builtin(scenario), sel);
  EXPECT_TRUE(r) << scenario;
  return *r;
}

std::vector<std::string> failing(const std::vector<PropertyResult>& rs) {
  std::vector<std::string> out;
  for (const auto& r : rs)
    if (r.failed()) out.push_back(r.entry->name);
  return out;
}

TEST(ModelCheck, MatchesGolden) { EXPECT_EQ(testing::model_report(), golden("models.txt")); }

TEST(ModelCheck, CatalogExpectations) {
  int compared = 0;
  for (const char* name : {"single", "chain2"}) {
    auto k = build_kripke(*named_model(name));
    ASSERT_TRUE(k);
    for (const auto& e : tlogic::catalog()) {
      auto it = e.expected.find(name);
      if (it == e.expected.end()) continue;
      auto r = check_model(*k, {&e}, true);
      ASSERT_TRUE(r[0].checked) << e.name;
      auto want = it->second == tlogic::ExpectedOutcome::kHolds ? Outcome::kHolds : Outcome::kFails;
      EXPECT_EQ(r[0].outcome, want) << e.name << " on " << name;
      ++compared;
    }
  }
  EXPECT_GE(compared, 28);
}

TEST(ModelCheck, Tl5LassoReplays) {
  auto k = build_kripke(ModelConfig::single());
  ASSERT_TRUE(k);
  auto r = check_model(*k, only("TL5"), true);
  ASSERT_EQ(r[0].outcome, Outcome::kFails);
  const auto& v = r[0].grounds[0].verdict;
  ASSERT_TRUE(v.lasso);
  EXPECT_TRUE(replayable(*k, *v.lasso));
  auto text = explain(r[0], *k);
  ASSERT_TRUE(text);
  EXPECT_EQ(text->rfind("TL5 Fails\n", 0), 0u);
  EXPECT_NE(text->find("  violated: G((state_is(t1,DISPATCHING) -> previous_state_is(t1,READY)))"),
            std::string::npos);
  EXPECT_NE(text->find("offending move: t1 RETRY_SCHEDULED -> DISPATCHING on DispatchRequested"),
            std::string::npos);
  EXPECT_NE(text->find("-- cycle --"), std::string::npos);
}

TEST(ModelCheck, UncheckableAndVacuous) {
  auto k = build_kripke(ModelConfig::single());
  // Catalog order: HP9, TL1, HP7'.
  auto r = check_model(*k, only("HP7',HP9,TL1"), true);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_FALSE(r[2].checked);
  EXPECT_EQ(r[2].note.rfind("not model-checkable", 0), 0u);
  EXPECT_EQ(r[0].outcome, Outcome::kHolds);
  EXPECT_EQ(r[0].note, "no bindings");
  EXPECT_EQ(r[1].outcome, Outcome::kHolds);
  ASSERT_FALSE(explain(r[1], *k));
}

TEST(Runtime, NominalPassesEverything) {
  auto rs = runtime("nominal");
  EXPECT_TRUE(failing(rs).empty());
  for (const auto& r : rs) {
    EXPECT_TRUE(r.checked) << r.entry->name;
    EXPECT_EQ(r.outcome, Outcome::kSatisfied) << r.entry->name;
    if (r.entry->name == "HP16" || r.entry->name == "HP17") EXPECT_EQ(r.note, "witness");
  }
}

TEST(Runtime, DetectsEveryAdversarialScenario) {
  using V = std::vector<std::string>;
  std::map<std::string, V> want = {
      {"circular_delegation", {"HP1", "HP5", "HP13", "HP15", "HP16", "TL1"}},
      {"privilege_escalation", {"HP9"}},
      {"premature_invocation", {"HP10"}},
      {"unvalidated_invoke", {"HP9"}},
      {"cancel_midflight", {"HP4", "HP5", "HP14", "HP15"}},
      {"awaiting_starvation", {"HP4"}},
      {"clarification", {"HP2", "HP17"}},
      {"retry_exhaustion", {}},
  };
  for (const auto& [name, props] : want) EXPECT_EQ(failing(runtime(name)), props) << name;
}

TEST(Runtime, Hp9FlagsTheOffendingStep) {
  auto s = *scenarios::builtin("unvalidated_invoke");
  auto run = orchestration::run_task(s);
  auto rep = trace::replay(run.trace);
  ASSERT_TRUE(rep);
  auto r = check_runtime(*rep, only("HP9"));
  ASSERT_EQ(r[0].outcome, Outcome::kViolated);
  std::uint64_t step = 0;
  for (const auto& g : r[0].grounds)
    if (g.verdict.outcome == Outcome::kViolated) step = *g.verdict.step;
  EXPECT_EQ(step, rep->invoke_ticks.at("shadowPricer").front());
  EXPECT_EQ(step, 6u);
  auto text = explain(r[0], *rep);
  ASSERT_TRUE(text);
  EXPECT_EQ(*text,
            "HP9 Violated at step 6\n"
            "  violated: AG((invoked_ee(shadowPricer) -> vm_ok(shadowPricer)))\n"
            "  holding at step 6: invoked_ee(shadowPricer)\n");
}

TEST(Runtime, StarvationNeedsPropagation) {
  EXPECT_EQ(runtime("awaiting_starvation", only("TL10"))[0].outcome, Outcome::kSatisfied);
  auto s = *scenarios::builtin("awaiting_starvation");
  s.enforcement.failure_propagation = false;
  s.fsm.propagate_dependency_failure = false;
  auto r = check_scenario_run(s, only("TL10"));
  ASSERT_TRUE(r);
  EXPECT_EQ((*r)[0].outcome, Outcome::kViolated);
}

TEST(Runtime, NoBindingsAndNoEvidence) {
  auto rs = runtime("clarification", only("HP1,TL1"));
  EXPECT_EQ(rs[1].note, "no bindings");
  EXPECT_EQ(rs[1].outcome, Outcome::kSatisfied);
  EXPECT_EQ(rs[0].outcome, Outcome::kSatisfied);
  auto rep = trace::replay(orchestration::run_task(*scenarios::builtin("clarification")).trace);
  EXPECT_FALSE(explain(rs[0], *rep));
}

TEST(KillMatrix, MatchesGolden) {
  auto rows = kill_matrix();
  ASSERT_TRUE(rows) << rows.error();
  ASSERT_EQ(rows->size(), scenarios::all_mutations().size());
  for (const auto& r : *rows) EXPECT_FALSE(r.killed_by.empty()) << scenarios::to_string(r.mutation);
  EXPECT_EQ(render_kill_matrix(*rows), golden("kill_matrix.txt"));
}

}  // namespace
}  // namespace akv::checker
