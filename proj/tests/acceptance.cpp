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

// Acceptance checks 1-8. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "akv/kernel.hpp"
#include "akv/verify.hpp"
#include "ctl_oracles.hpp"
#include "formula_gen.hpp"
#include "model_report.hpp"
#include "run_cli.hpp"

namespace {

using namespace akv;
using checker::Outcome;
using Clock = std::chrono::steady_clock;

struct Check {
  bool ok = true;
  std::ostringstream why;

  void expect(bool cond, const std::string& what) {
    if (cond) return;
    if (!ok) why << "; ";
    ok = false;
    why << what;
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string golden(const std::string& name) {
  return testing::slurp(std::string(AKV_SOURCE_DIR) + "/tests/golden/" + name);
}

checker::Selection sel(const char* s) { return *tlogic::select_properties(s); }

const checker::PropertyResult* find(const std::vector<checker::PropertyResult>& rs,
                                    const std::string& name) {
  for (const auto& r : rs)
    if (r.entry->name == name) return &r;
  return nullptr;
}

Outcome outcome_of(const std::vector<checker::PropertyResult>& rs, const std::string& name) {
  const auto* r = find(rs, name);
  return r ? r->outcome : Outcome::kInconclusive;
}

void lifecycle_exhaustive(Check& c) {
  using namespace lifecycle;
  auto t0 = Clock::now();
  int pairs = 0, terminal = 0;
  for (auto s : all_states()) {
    for (auto e : all_events()) {
      ++pairs;
      for (int bits = 0; bits < 64; ++bits) {
        SubTaskRecord r;
        r.id = "t";
        r.state = s;
        GuardSnapshot g{bool(bits & 1), bool(bits & 2), bool(bits & 4),
                        bool(bits & 8), bool(bits & 16), bool(bits & 32)};
        auto out = transition(r, e, g);
        if (out) {
          c.expect(!is_terminal(s), std::string(to_string(s)) + " left a terminal state");
          c.expect(out->state == table_target(s, e), "target off the table");
        } else {
          c.expect(out.error().state == s && out.error().event == e, "rejection mislabelled");
          if (is_terminal(s)) c.expect(out.error().reason == "terminal", "terminal reason");
        }
      }
      if (is_terminal(s)) ++terminal;
    }
  }
  double secs = seconds_since(t0);
  c.expect(pairs == 11 * 13, "pair count");
  c.expect(terminal == 3 * 13, "terminal pair count");
  c.expect(secs < 1.0, "took " + std::to_string(secs) + " s");
  c.why << (c.ok ? "" : " | ") << pairs << " pairs x 64 guard snapshots, " << terminal
        << " terminal pairs absorbed";
}

void model_suite(Check& c) {
  auto t0 = Clock::now();
  const char* holds[] = {"TL1", "TL2", "TL3",  "TL4",  "TL6",  "TL7",  "TL8",
                         "TL9", "TL10", "TL11", "TL12", "TL13", "TL14", "TL5'"};
  for (const char* model : {"single", "chain2"}) {
    auto k = checker::build_kripke(*checker::named_model(model), checker::kDefaultStateCap);
    if (!k) {
      c.expect(false, std::string(model) + " over cap");
      continue;
    }
    for (const char* p : holds) {
      auto r = checker::check_model(*k, {*tlogic::find_property(p)}, true);
      c.expect(r[0].checked && r[0].outcome == Outcome::kHolds,
               std::string(p) + " on " + model + " is " + std::string(checker::to_string(r[0].outcome)));
    }
    auto tl5 = checker::check_model(*k, {*tlogic::find_property("TL5")}, true);
    bool lasso = false;
    for (const auto& g : tl5[0].grounds) {
      if (g.verdict.outcome == Outcome::kFails && g.verdict.lasso)
        lasso = checker::replayable(*k, *g.verdict.lasso);
    }
    c.expect(tl5[0].outcome == Outcome::kFails && lasso,
             std::string("TL5 on ") + model + " lacks a replayable failing lasso");

    auto cfg = *checker::named_model(model);
    for (auto& n : cfg.nodes) n.retry_limit = 0;
    auto k0 = checker::build_kripke(cfg);
    auto r0 = checker::check_model(*k0, {*tlogic::find_property("TL5")}, true);
    c.expect(r0[0].outcome == Outcome::kHolds, std::string("TL5 with retry_limit=0 on ") + model);
  }
  c.expect(testing::model_report() == golden("models.txt"), "state counts/verdicts differ from golden");
  double secs = seconds_since(t0);
  c.expect(secs < 10.0, "took " + std::to_string(secs) + " s");
  c.why << (c.ok ? "" : " | ") << "single and chain2, 14 entries Hold, TL5 Fails then Holds at retry 0";
}

void oracle_equivalence(Check& c) {
  std::set<tlogic::Op> ops;
  bool with_fair = false, without_fair = false;
  int rows = 0;
  for (const auto& o : testing::oracles()) {
    c.expect(o.n <= 6, std::string(o.name) + " too big");
    auto k = testing::make(o);
    for (const auto& row : o.rows) {
      auto f = tlogic::parse(row.formula);
      auto s = checker::sat(k, *f, row.fair);
      c.expect(s && testing::members(*s) == row.expected,
               std::string(o.name) + ": " + row.formula);
      ops.insert(f->op());
      (row.fair ? with_fair : without_fair) = true;
      ++rows;
    }
  }
  c.expect(testing::oracles().size() >= 10, "fewer than 10 structures");
  for (auto op : {tlogic::Op::kEX, tlogic::Op::kEU, tlogic::Op::kEG, tlogic::Op::kAF,
                  tlogic::Op::kAG, tlogic::Op::kAU, tlogic::Op::kEF, tlogic::Op::kAX})
    c.expect(ops.contains(op), "operator not covered");
  c.expect(with_fair && without_fair, "fairness coverage");
  c.why << (c.ok ? "" : " | ") << testing::oracles().size() << " structures, " << rows
        << " hand-computed rows";
}

void runtime_suite(Check& c) {
  std::string path = "acceptance_nominal.trace.jsonl";
  c.expect(testing::run_cli("run nominal --trace " + path).code == 0, "run nominal");
  auto mon = testing::run_cli("monitor " + path + " --props all");
  c.expect(mon.code == 0, "monitor exit " + std::to_string(mon.code));
  c.expect(mon.out.find("Violated") == std::string::npos, "a property was Violated");
  std::remove(path.c_str());

  auto rs = *checker::check_scenario_run(*scenarios::builtin("nominal"), sel("all"));
  for (const char* p : {"HP1", "HP2", "HP3", "HP4", "HP5", "HP6", "HP12", "HP15"})
    c.expect(outcome_of(rs, p) == Outcome::kSatisfied, std::string(p) + " not Satisfied");
  for (const char* p : {"HP16", "HP17"}) {
    const auto* r = find(rs, p);
    c.expect(r && r->outcome == Outcome::kSatisfied && r->note == "witness",
             std::string(p) + " not witnessed");
  }
  c.why << (c.ok ? "" : " | ") << "nominal: 0 Violated, HP1-HP6/HP12/HP15 Satisfied, HP16/HP17 witnessed";
}

void adversarial(Check& c) {
  auto circ = *checker::check_scenario_run(*scenarios::builtin("circular_delegation"), sel("all"));
  c.expect(outcome_of(circ, "HP1") == Outcome::kViolated, "HP1 on circular_delegation");
  c.expect(outcome_of(circ, "HP5") == Outcome::kViolated, "HP5 on circular_delegation");
  auto loop = testing::run_cli("run circular_delegation");
  c.expect(loop.code == 1, "cmd_run circular_delegation exit " + std::to_string(loop.code));
  auto s = *scenarios::builtin("circular_delegation");
  auto run = orchestration::run_task(s);
  c.expect(run.budget_exhausted && run.trace.back().tick == s.tick_budget, "budget not reached");

  auto uv = orchestration::run_task(*scenarios::builtin("unvalidated_invoke"));
  auto rep = *trace::replay(uv.trace);
  auto hp9 = checker::check_runtime(rep, sel("HP9"));
  std::uint64_t offending = rep.invoke_ticks.at("shadowPricer").front();
  bool at_step = false;
  for (const auto& g : hp9[0].grounds)
    if (g.verdict.outcome == Outcome::kViolated) at_step = g.verdict.step == offending;
  c.expect(hp9[0].outcome == Outcome::kViolated && at_step, "HP9 step on unvalidated_invoke");

  auto pre = *checker::check_scenario_run(*scenarios::builtin("premature_invocation"), sel("HP10"));
  c.expect(pre[0].outcome == Outcome::kViolated, "HP10 on premature_invocation");

  auto starve = *scenarios::builtin("awaiting_starvation");
  auto ok = *checker::check_scenario_run(starve, sel("TL10"));
  c.expect(ok[0].outcome == Outcome::kSatisfied, "TL10 with propagation");
  starve.enforcement.failure_propagation = false;
  starve.fsm.propagate_dependency_failure = false;
  auto off = *checker::check_scenario_run(starve, sel("TL10"));
  c.expect(off[0].outcome == Outcome::kViolated, "TL10 without propagation");
  c.why << (c.ok ? "" : " | ") << "HP1/HP5, HP9 at step " << offending
        << ", HP10, TL10 with and without propagation";
}

void kill_matrix(Check& c) {
  auto rows = checker::kill_matrix();
  if (!rows) {
    c.expect(false, rows.error());
    return;
  }
  for (const auto& r : *rows)
    c.expect(!r.killed_by.empty(), std::string(scenarios::to_string(r.mutation)) + " survives");
  c.expect(rows->size() == 5, "mutation count");
  c.expect(checker::render_kill_matrix(*rows) == golden("kill_matrix.txt"), "differs from golden");
  c.why << (c.ok ? "" : " | ") << rows->size() << " mutations, each killed";
}

void parser(Check& c) {
  testing::FormulaGen gen(2026);
  int round_trips = 0;
  for (int i = 0; i < 1000; ++i) {
    auto f = gen.next(6, i % 2 ? tlogic::Logic::kLtl : tlogic::Logic::kCtl);
    auto back = tlogic::parse(tlogic::render(f));
    if (f.depth() <= 6 && back && *back == f) ++round_trips;
  }
  c.expect(round_trips == 1000, std::to_string(round_trips) + "/1000 round-trip");
  int positioned = 0;
  for (const auto& m : testing::malformed_inputs()) {
    auto f = tlogic::parse(m.text);
    if (!f && f.error().line == m.line && f.error().col == m.col) ++positioned;
  }
  int total = int(testing::malformed_inputs().size());
  c.expect(total >= 20 && positioned == total,
           std::to_string(positioned) + "/" + std::to_string(total) + " positioned errors");
  c.why << (c.ok ? "" : " | ") << round_trips << " round-trips, " << positioned
        << " positioned syntax errors";
}

void determinism(Check& c) {
  std::string a = "acceptance_det_a.trace.jsonl", b = "acceptance_det_b.trace.jsonl";
  for (const auto& name : scenarios::builtin_names()) {
    int ra = testing::run_cli("run " + name + " --seed 42 --trace " + a).code;
    int rb = testing::run_cli("run " + name + " --seed 42 --trace " + b).code;
    auto ta = testing::slurp(a), tb = testing::slurp(b);
    c.expect(ra == rb && ra != 2 && !ta.empty() && ta == tb, name + " traces differ");
  }
  std::remove(a.c_str());
  std::remove(b.c_str());
  c.why << (c.ok ? "" : " | ") << scenarios::builtin_names().size()
        << " scenarios, byte-identical traces";
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Check&)>>> criteria = {
      {"lifecycle exhaustiveness", lifecycle_exhaustive},
      {"model-checking suite", model_suite},
      {"oracle equivalence", oracle_equivalence},
      {"runtime suite", runtime_suite},
      {"adversarial detection", adversarial},
      {"mutation kill matrix", kill_matrix},
      {"parser", parser},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    std::cout << (c.ok ? "PASS " : "FAIL ") << i + 1 << " " << criteria[i].first << ": "
              << c.why.str() << "\n";
    failed += !c.ok;
  }
  return failed ? 1 : 0;
}
