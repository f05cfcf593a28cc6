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

#include <sstream>

#include "akv/kernel.hpp"
#include "akv/monitor.hpp"

namespace akv::checker {

using tlogic::Formula;

std::vector<PropertyResult> check_runtime(const trace::Replay& r, const Selection& props) {
  std::vector<PropertyResult> out;
  for (const auto* entry : props) {
    PropertyResult pr;
    pr.entry = entry;
    auto grounds = tlogic::instantiate(*entry, r.nodes, r.entities);
    if (grounds.empty()) {
      pr.outcome = Outcome::kSatisfied;
      pr.note = "no bindings";
      out.push_back(std::move(pr));
      continue;
    }
    bool violated = false;
    for (const auto& g : grounds) {
      Formula monitored = g;
      if (auto proj = tlogic::ltl_projection(g)) {
        monitored = *proj;
      } else if (auto target = tlogic::witness_target(g); proj.error().witness_mode && target) {
        monitored = tlogic::F(*target);
        pr.note = "witness";
      } else {
        pr.checked = false;
        pr.note = "not runtime-checkable: " + proj.error().reason;
        break;
      }
      Verdict v = monitor_trace(monitored, r.snapshots);
      violated = violated || v.outcome == Outcome::kViolated;
      pr.grounds.push_back({g, std::move(v)});
    }
    if (pr.checked) pr.outcome = violated ? Outcome::kViolated : Outcome::kSatisfied;
    else pr.grounds.clear();
    out.push_back(std::move(pr));
  }
  return out;
}

std::vector<PropertyResult> check_model(const KripkeStructure& k, const Selection& props,
                                        bool fair) {
  std::vector<PropertyResult> out;
  for (const auto* entry : props) {
    PropertyResult pr;
    pr.entry = entry;
    auto grounds = tlogic::instantiate(*entry, k.node_ids(), {});
    if (grounds.empty()) {
      pr.outcome = Outcome::kHolds;
      pr.note = "no bindings";
      out.push_back(std::move(pr));
      continue;
    }
    bool fails = false;
    for (const auto& g : grounds) {
      auto v = check_ctl(k, g, fair);
      if (!v) {
        pr.checked = false;
        pr.note = "not model-checkable: " + v.error().detail;
        break;
      }
      fails = fails || v->outcome == Outcome::kFails;
      pr.grounds.push_back({g, std::move(*v)});
    }
    if (pr.checked) pr.outcome = fails ? Outcome::kFails : Outcome::kHolds;
    else pr.grounds.clear();
    out.push_back(std::move(pr));
  }
  return out;
}

Expected<std::string, NoEvidence> explain(const PropertyResult& p, const KripkeStructure& k) {
  for (const auto& g : p.grounds) {
    if (g.verdict.outcome != Outcome::kFails || !g.verdict.lasso) continue;
    const Lasso& l = *g.verdict.lasso;
    std::ostringstream os;
    os << p.entry->name << " Fails\n";
    os << "  violated: " << tlogic::render(g.formula) << "\n";
    auto path = l.path();
    os << "  counterexample:\n";
    for (std::size_t i = 0; i < path.size(); ++i) {
      if (i == l.prefix.size()) os << "  -- cycle --\n";
      os << "    " << i << ": " << k.describe(path[i]) << "\n";
    }
    os << "    back to " << l.prefix.size() << "\n";
    if (l.focus && *l.focus > 0) {
      StateId from = path[*l.focus - 1], to = path[*l.focus];
      const EdgeLabel& e = k.edge_label(from, to);
      if (e.node >= 0) {
        auto i = std::size_t(e.node);
        os << "  offending move: " << k.node_ids()[i] << " "
           << lifecycle::to_string(k.state(from).nodes[i].state) << " -> "
           << lifecycle::to_string(k.state(to).nodes[i].state);
        if (e.event) os << " on " << lifecycle::to_string(*e.event);
        os << " (step " << *l.focus << ")\n";
      } else {
        os << "  offending move: " << to_string(k.state(from).phase) << " -> "
           << to_string(k.state(to).phase) << " (step " << *l.focus << ")\n";
      }
    } else {
      os << "  violated in the initial state\n";
    }
    return os.str();
  }
  return unexpected(NoEvidence{});
}

Expected<std::string, NoEvidence> explain(const PropertyResult& p, const trace::Replay& r) {
  for (const auto& g : p.grounds) {
    if (g.verdict.outcome != Outcome::kViolated) continue;
    std::uint64_t step = g.verdict.step.value_or(0);
    std::ostringstream os;
    os << p.entry->name << " Violated at step " << step << "\n";
    os << "  violated: " << tlogic::render(g.formula) << "\n";
    if (!g.verdict.detail.empty()) os << "  " << g.verdict.detail << "\n";
    if (step < r.snapshots.size()) {
      os << "  holding at step " << step << ":";
      bool any = false;
      for (const auto& a : tlogic::atoms_of(g.formula)) {
        if (!r.snapshots[step].contains(a.str())) continue;
        os << " " << a.str();
        any = true;
      }
      if (!any) os << " (none)";
      os << "\n";
    }
    return os.str();
  }
  return unexpected(NoEvidence{});
}

Expected<std::vector<PropertyResult>, std::string> check_scenario_run(
    const scenarios::Scenario& s, const Selection& props) {
  auto run = orchestration::run_task(s);
  auto rep = trace::replay(run.trace);
  if (!rep) return unexpected(rep.error().message);
  return check_runtime(*rep, props);
}

std::string kill_base(scenarios::Mutation m) {
  return m == scenarios::Mutation::kDisableDagMembershipGate ? "privilege_escalation" : "nominal";
}

namespace {

struct Outcomes {
  std::vector<PropertyResult> runtime, model;
};

Expected<Outcomes, std::string> evaluate(const scenarios::Scenario& s, const Selection& props,
                                         std::size_t cap) {
  Outcomes o;
  auto rt = check_scenario_run(s, props);
  if (!rt) return unexpected(s.name + ": " + rt.error());
  o.runtime = std::move(*rt);
  auto k = build_kripke(model_from_scenario(s), cap);
  if (!k) return unexpected(s.name + ": state cap exceeded");
  o.model = check_model(*k, props, true);
  return o;
}

}  // namespace

Expected<std::vector<KillRow>, std::string> kill_matrix(std::size_t cap) {
  auto props = tlogic::select_properties("all");
  std::vector<KillRow> rows;
  for (auto m : scenarios::all_mutations()) {
    KillRow row{m, kill_base(m), {}};
    auto base = scenarios::builtin(row.base);
    if (!base) return unexpected(base.error().message());
    auto mutant = scenarios::mutate(*base, m);
    if (!mutant) return unexpected(std::string(to_string(m)) + " not applicable to " + row.base);
    auto before = evaluate(*base, *props, cap);
    if (!before) return unexpected(before.error());
    auto after = evaluate(*mutant, *props, cap);
    if (!after) return unexpected(after.error());
    for (std::size_t i = 0; i < props->size(); ++i) {
      bool passed = !before->runtime[i].failed() && !before->model[i].failed();
      bool failed = after->runtime[i].failed() || after->model[i].failed();
      if (passed && failed) row.killed_by.push_back((*props)[i]->name);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string render_kill_matrix(const std::vector<KillRow>& rows) {
  std::ostringstream os;
  os << "# mutation base killed_by\n";
  for (const auto& r : rows) {
    os << to_string(r.mutation) << " " << r.base;
    if (r.killed_by.empty()) os << " -";
    for (std::size_t i = 0; i < r.killed_by.size(); ++i)
      os << (i ? "," : " ") << r.killed_by[i];
    os << "\n";
  }
  return os.str();
}

}  // namespace akv::checker
