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

#include "akv/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

namespace akv::tlogic {

std::string_view to_string(Category c) {
  switch (c) {
    case Category::kLiveness: return "liveness";
    case Category::kSafety: return "safety";
    case Category::kCompleteness: return "completeness";
    case Category::kFairness: return "fairness";
    case Category::kReachability: return "reachability";
    case Category::kFlow: return "flow";
  }
  return "?";
}

namespace {

Formula must_parse(std::string_view text) {
  auto f = parse(text);
  if (!f) throw std::logic_error("bad catalog formula: " + std::string(text));
  return *f;
}

struct Spec {
  const char* name;
  Category category;
  Binding binding;
  const char* summary;
  const char* typeset;
  const char* formula;
  const char* notes = "";
  const char* variant_of = nullptr;
  const char* substitute = nullptr;
  bool model_expect = false;
  ExpectedOutcome single = ExpectedOutcome::kHolds;
  ExpectedOutcome chain2 = ExpectedOutcome::kHolds;
};

using C = Category;
using B = Binding;
using EO = ExpectedOutcome;

const Spec kSpecs[] = {
    // Host agent properties.
    {"HP1", C::kLiveness, B::kNone,
     "Each user request is eventually answered.",
     "AG(Req_U → AF Resp_H)",
     "AG(req_received -> AF resp_sent)"},
    {"HP2", C::kLiveness, B::kNone,
     "Each user request eventually has a resolved intent.",
     "AG(Req_U → AF I_U)",
     "AG(req_received -> AF intent_resolved)"},
    {"HP3", C::kLiveness, B::kNone,
     "A resolved intent is eventually planned into a task DAG.",
     "AG(I_U → AF LLM.Build_Task_DAG(I_U, {EE_info}))",
     "AG(intent_resolved -> AF dag_built)"},
    {"HP4", C::kLiveness, B::kEachNode,
     "Every sub-task of a built DAG is eventually invoked.",
     "AG(LLM.Build_Task_DAG(I_U, {EE_info})) → ⋀_{i=1}^{|D|} AF(CL.invoke(EE, protocol, sub_task_i))",
     "AG(dag_built -> AF invoked($v))",
     "Read per node as AG(dag_built -> AF invoked(v)); the conjunction becomes "
     "one ground formula per DAG node."},
    {"HP5", C::kLiveness, B::kEachNode,
     "An invoked sub-task eventually produces a result.",
     "AG(CL.invoke(EE, protocol, sub_task)) → AF(CL.return_result(sub_task))",
     "AG(invoked($v) -> AF result_returned($v))",
     "Read with the implication inside AG. A failure reply counts as a result."},
    {"HP6", C::kLiveness, B::kEachNode,
     "Returned results are eventually aggregated.",
     "⋀_{i=1}^{|D|} AG(CL.return_result(sub_task_i)) → AF(O.aggregate(sub_task_1, …, sub_task_n))",
     "AG(result_returned($v) -> AF aggregated)",
     "Read per node with the implication inside AG."},
    {"HP7", C::kSafety, B::kNone,
     "The DAG is built right after registry discovery.",
     "AG(R.entities → AX(LLM.Build_Task_DAG(I_U, {EE_info})))",
     "AG(discovered -> AX dag_built)",
     "Literal AX reading: construction in the step after discovery. See HP7' "
     "for the precedence reading."},
    {"HP8", C::kSafety, B::kEachNode,
     "Only sub-tasks that belong to the built DAG are invoked.",
     "AG(CL.invoke(EE, protocol, sub_task) → sub_task ∈ D)",
     "AG(invoked($v) -> in_dag($v))",
     "At runtime $v ranges over DAG nodes and any node named by an invocation."},
    {"HP9", C::kSafety, B::kEachEntity,
     "Only validated entities that meet the reliability bar are invoked.",
     "AG(CL.invoke(EE, protocol, payload) → VM(EE))",
     "AG(invoked_ee($e) -> vm_ok($e))",
     "Instantiated per external entity, including entities reached through a "
     "proxy."},
    {"HP10", C::kSafety, B::kEachNode,
     "A sub-task is invoked only once its dependencies have completed.",
     "⋀_{i=1}^{|D|} AG(CL.invoke(EE, protocol, sub_task_i)) → dependencies[sub_task_i] = ∅",
     "AG(invoked($v) -> dependencies_satisfied($v))",
     "Read per node with the implication inside AG; dependencies[v] = ∅ is "
     "dependencies_satisfied(v)."},
    {"HP11", C::kSafety, B::kEachNode,
     "A response is given only after every sub-task was invoked.",
     "Resp_H → ⋀_{i=1}^{|D|} AG(CL.invoke(EE, protocol, sub_task_i))",
     "resp_sent -> AG invoked($v)",
     "Kept verbatim; it only constrains the initial state. HP11' is the "
     "ordering reading, bound to Success responses."},
    {"HP12", C::kCompleteness, B::kNone,
     "Each request leads straight to planning or to clarification.",
     "AG(Req_U → EX(LLM.Build_Task_DAG(I_U, {EE_info}) ∨ Clarify_Intent))",
     "AG(req_received -> EX (dag_built | clarify_intent))",
     "At runtime EX is read as the next step of the observed run."},
    {"HP13", C::kFairness, B::kEachAgent,
     "Agent calls do not stay pending forever.",
     "FAIRNESS(Agent_RPC_Calls)",
     "G(invoked_ee($e) -> F responded($e))",
     "FAIRNESS(x) is informal; cataloged as G(pending(x) -> F resolved(x)) "
     "over agent entities."},
    {"HP14", C::kFairness, B::kEachTool,
     "Tool calls do not stay pending forever.",
     "FAIRNESS(JSON_RPC_Calls)",
     "G(invoked_ee($e) -> F responded($e))",
     "FAIRNESS(x) is informal; cataloged as G(pending(x) -> F resolved(x)) "
     "over tool entities."},
    {"HP15", C::kFairness, B::kEachNode,
     "Every sub-task invocation eventually yields a result.",
     "FAIRNESS(CL.return_result(sub_task))",
     "G(invoked($v) -> F result_returned($v))",
     "FAIRNESS(x) is informal; cataloged as G(pending(x) -> F resolved(x)) "
     "per node."},
    {"HP16", C::kReachability, B::kNone,
     "A state where the host replies is reachable.",
     "EF(Resp_H)",
     "EF resp_sent",
     "Runtime: witnessed iff resp_sent holds somewhere in the trace."},
    {"HP17", C::kReachability, B::kNone,
     "A state where the DAG gets built is reachable.",
     "EF(LLM.Build_Task_DAG(I_U, {EE_info}))",
     "EF dag_built",
     "Runtime: witnessed iff dag_built holds somewhere in the trace."},

    // Task lifecycle properties.
    {"TL1", C::kLiveness, B::kEachNode,
     "A created sub-task always ends in COMPLETED, ERROR or CANCELED.",
     "AG(state = CREATED → AF(state = COMPLETED ∨ state = ERROR ∨ state = CANCELED))",
     "AG(state_is($v, CREATED) -> AF (state_is($v, COMPLETED) | "
     "state_is($v, ERROR) | state_is($v, CANCELED)))",
     "", nullptr, nullptr, true},
    {"TL2", C::kLiveness, B::kEachNode,
     "A READY sub-task that needs an external entity reaches DISPATCHING.",
     "AG((state = READY ∧ external_entity_needed) → AF(state = DISPATCHING))",
     "AG((state_is($v, READY) & external_entity_needed($v)) -> "
     "AF state_is($v, DISPATCHING))",
     "Fails on models where READY is cancelable.", nullptr, nullptr, true},
    {"TL3", C::kLiveness, B::kEachNode,
     "FALLBACK_SELECTED moves on to DISPATCHING, CANCELED or FAILED.",
     "AG(state = FALLBACK SELECTED → AF(state = DISPATCHING ∨ state = CANCELED ∨ state = FAILED))",
     "AG(state_is($v, FALLBACK_SELECTED) -> AF (state_is($v, DISPATCHING) | "
     "state_is($v, CANCELED) | state_is($v, FAILED)))",
     "", nullptr, nullptr, true},
    {"TL4", C::kLiveness, B::kEachNode,
     "A dispatched sub-task reaches IN_PROGRESS.",
     "AG(state = DISPATCHING → AF(state = IN PROGRESS))",
     "AG(state_is($v, DISPATCHING) -> AF state_is($v, IN_PROGRESS))",
     "Needs fairness when entities may stay silent.", nullptr, nullptr, true},
    {"TL5", C::kSafety, B::kEachNode,
     "DISPATCHING is entered only from READY.",
     "G((state = DISPATCHING) → (previous_state = READY))",
     "G(state_is($v, DISPATCHING) -> previous_state_is($v, READY))",
     "Verbatim. Any retry or fallback re-dispatch violates it; TL5' admits "
     "the recovery sources.",
     nullptr, "TL5'", true, EO::kFails, EO::kFails},
    {"TL6", C::kSafety, B::kEachNode,
     "COMPLETED is entered only from IN_PROGRESS.",
     "G((state = COMPLETED) → (previous_state = IN PROGRESS))",
     "G(state_is($v, COMPLETED) -> previous_state_is($v, IN_PROGRESS))",
     "", nullptr, nullptr, true},
    {"TL7", C::kSafety, B::kEachNode,
     "ERROR is absorbing.",
     "AG((state = ERROR) → AG(state = ERROR))",
     "AG(state_is($v, ERROR) -> AG state_is($v, ERROR))",
     "", nullptr, nullptr, true},
    {"TL8", C::kSafety, B::kEachNode,
     "RETRY_SCHEDULED is entered only from FAILED.",
     "AG(state = RETRY SCHEDULED → previous_state = FAILED)",
     "AG(state_is($v, RETRY_SCHEDULED) -> previous_state_is($v, FAILED))",
     "", nullptr, nullptr, true},
    {"TL9", C::kSafety, B::kEachNode,
     "CANCELED is absorbing.",
     "AG((state = CANCELED) → AG(state = CANCELED))",
     "AG(state_is($v, CANCELED) -> AG state_is($v, CANCELED))",
     "", nullptr, nullptr, true},
    {"TL10", C::kSafety, B::kEachNode,
     "No sub-task waits on its dependencies forever.",
     "AG(state = AWAITING DEPENDENCY → AF(state ≠ AWAITING DEPENDENCY))",
     "AG(state_is($v, AWAITING_DEPENDENCY) -> AF !state_is($v, "
     "AWAITING_DEPENDENCY))",
     "Relies on DependencyTerminallyFailed propagation when a dependency dies.",
     nullptr, nullptr, true},
    {"TL11", C::kFairness, B::kEachNode,
     "A waiting sub-task whose dependencies are done becomes READY.",
     "AG(state = AWAITING DEPENDENCY ∧ dependencies_satisfied → AF(state = READY))",
     "AG((state_is($v, AWAITING_DEPENDENCY) & dependencies_satisfied($v)) -> "
     "AF state_is($v, READY))",
     "Fails on models where AWAITING_DEPENDENCY is cancelable.", nullptr,
     nullptr, true},
    {"TL12", C::kFlow, B::kEachNode,
     "FAILED without fallbacks goes to RETRY_SCHEDULED or on to ERROR.",
     "AG((state = FAILED ∧ ¬has_fallbacks) → (AX(state = RETRY SCHEDULED ∨ AX(state = ERROR))))",
     "AG((state_is($v, FAILED) & !has_fallbacks($v)) -> AX (state_is($v, "
     "RETRY_SCHEDULED) | AX state_is($v, ERROR)))",
     "Nested AX kept as published.", nullptr, nullptr, true},
    {"TL13", C::kFlow, B::kEachNode,
     "FAILED with fallbacks goes to RETRY_SCHEDULED, FALLBACK_SELECTED or "
     "ERROR.",
     "AG((state = FAILED ∧ has_fallbacks) → (AX(state = RETRY SCHEDULED ∨ AX(state = FALLBACK SELECTED) ∨ AX(state = ERROR))))",
     "AG((state_is($v, FAILED) & has_fallbacks($v)) -> AX (state_is($v, "
     "RETRY_SCHEDULED) | AX state_is($v, FALLBACK_SELECTED) | AX state_is($v, "
     "ERROR)))",
     "Verbatim nesting requires the state after FALLBACK_SELECTED to be "
     "FALLBACK_SELECTED again, so it fails whenever a fallback is taken. "
     "TL13' flattens the disjunction.",
     nullptr, "TL13'", true},
    {"TL14", C::kFlow, B::kEachNode,
     "A scheduled retry that policy permits is dispatched next.",
     "AG((state = RETRY SCHEDULED ∧ retry_policy_permits) → AX(state = DISPATCHING))",
     "AG((state_is($v, RETRY_SCHEDULED) & retry_policy_permits($v)) -> AX "
     "state_is($v, DISPATCHING))",
     "", nullptr, nullptr, true},

    // Flagged variants.
    {"HP7'", C::kSafety, B::kNone,
     "The DAG is never built before discovery has happened.",
     "AG(R.entities → AX(LLM.Build_Task_DAG(I_U, {EE_info})))",
     "(!dag_built U discovered) | G !dag_built",
     "Precedence reading of HP7 (weak until). Runtime only.", "HP7"},
    {"HP11'", C::kSafety, B::kEachNode,
     "A Success response never precedes the invocation of any DAG node.",
     "Resp_H → ⋀_{i=1}^{|D|} AG(CL.invoke(EE, protocol, sub_task_i))",
     "(!resp_success U invoked($v)) | G !resp_success",
     "Ordering reading of HP11 bound to Success responses; Error and "
     "clarification responses may come earlier. Runtime only.",
     "HP11"},
    {"TL5'", C::kSafety, B::kEachNode,
     "DISPATCHING is entered only from READY, RETRY_SCHEDULED or "
     "FALLBACK_SELECTED.",
     "G((state = DISPATCHING) → (previous_state = READY))",
     "G(state_is($v, DISPATCHING) -> (previous_state_is($v, READY) | "
     "previous_state_is($v, RETRY_SCHEDULED) | previous_state_is($v, "
     "FALLBACK_SELECTED)))",
     "TL5 widened to the lifecycle's three dispatch sources.", "TL5", nullptr,
     true},
    {"TL13'", C::kFlow, B::kEachNode,
     "FAILED with fallbacks moves next to RETRY_SCHEDULED, FALLBACK_SELECTED "
     "or ERROR.",
     "AG((state = FAILED ∧ has_fallbacks) → (AX(state = RETRY SCHEDULED ∨ AX(state = FALLBACK SELECTED) ∨ AX(state = ERROR))))",
     "AG((state_is($v, FAILED) & has_fallbacks($v)) -> AX (state_is($v, "
     "RETRY_SCHEDULED) | state_is($v, FALLBACK_SELECTED) | state_is($v, "
     "ERROR)))",
     "TL13 with a single AX over the three targets.", "TL13", nullptr, true},
};

std::vector<PropertyEntry> build_catalog() {
  std::vector<PropertyEntry> out;
  for (const auto& s : kSpecs) {
    PropertyEntry e{
        s.name,  s.category, s.summary, s.typeset, must_parse(s.formula),
        s.binding, s.notes,  std::nullopt, std::nullopt, {},
    };
    if (s.variant_of) e.variant_of = s.variant_of;
    if (s.substitute) e.substitute = s.substitute;
    if (s.model_expect) {
      e.expected["single"] = s.single;
      e.expected["chain2"] = s.chain2;
    }
    if (auto err = validate(e.formula)) {
      throw std::logic_error("catalog entry " + e.name + ": " + *err);
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

// "TL12" -> ("TL", 12); variants and other names -> nullopt.
std::optional<std::pair<std::string, int>> split_name(std::string_view n) {
  std::size_t i = 0;
  while (i < n.size() && std::isalpha(static_cast<unsigned char>(n[i]))) ++i;
  if (i == 0 || i == n.size()) return std::nullopt;
  int num = 0;
  for (std::size_t j = i; j < n.size(); ++j) {
    if (!std::isdigit(static_cast<unsigned char>(n[j]))) return std::nullopt;
    num = num * 10 + (n[j] - '0');
  }
  return std::make_pair(std::string(n.substr(0, i)), num);
}

}  // namespace

const std::vector<PropertyEntry>& catalog() {
  static const std::vector<PropertyEntry> entries = build_catalog();
  return entries;
}

Expected<const PropertyEntry*, NotFound> find_property(std::string_view name) {
  const std::string key = upper(trim(name));
  for (const auto& e : catalog()) {
    if (e.name == key) return &e;
  }
  return unexpected(NotFound{std::string(name)});
}

Expected<std::vector<const PropertyEntry*>, NotFound> select_properties(
    std::string_view selection) {
  std::set<std::string> chosen;
  auto add_substituted = [&](const PropertyEntry& e) {
    chosen.insert(e.substitute ? *e.substitute : e.name);
  };

  std::size_t start = 0;
  while (start <= selection.size()) {
    std::size_t comma = selection.find(',', start);
    if (comma == std::string_view::npos) comma = selection.size();
    const std::string term = upper(trim(selection.substr(start, comma - start)));
    start = comma + 1;
    if (term.empty()) continue;

    if (term == "ALL") {
      for (const auto& e : catalog()) {
        if (!e.is_variant()) add_substituted(e);
      }
      for (const auto& e : catalog()) {
        if (e.is_variant()) chosen.insert(e.name);
      }
      continue;
    }
    if (auto dots = term.find(".."); dots != std::string::npos) {
      auto lo = split_name(term.substr(0, dots));
      auto hi = split_name(term.substr(dots + 2));
      if (!lo || !hi || lo->first != hi->first) return unexpected(NotFound{term});
      bool any = false;
      for (const auto& e : catalog()) {
        auto parts = split_name(e.name);
        if (e.is_variant() || !parts || parts->first != lo->first) continue;
        if (parts->second >= lo->second && parts->second <= hi->second) {
          add_substituted(e);
          any = true;
        }
      }
      if (!any) return unexpected(NotFound{term});
      continue;
    }
    auto e = find_property(term);
    if (!e) return unexpected(e.error());
    chosen.insert((*e)->name);
  }

  std::vector<const PropertyEntry*> out;
  for (const auto& e : catalog()) {
    if (chosen.count(e.name)) out.push_back(&e);
  }
  return out;
}

std::vector<Formula> instantiate(const PropertyEntry& entry,
                                 const std::vector<std::string>& nodes,
                                 const std::vector<EntityRef>& entities) {
  std::vector<Formula> out;
  switch (entry.binding) {
    case Binding::kNone:
      out.push_back(entry.formula);
      break;
    case Binding::kEachNode:
      for (const auto& v : nodes) out.push_back(substitute(entry.formula, {{"$v", v}}));
      break;
    case Binding::kEachEntity:
    case Binding::kEachAgent:
    case Binding::kEachTool:
      for (const auto& ee : entities) {
        if (entry.binding == Binding::kEachAgent && ee.kind != EntityKind::kAgent) continue;
        if (entry.binding == Binding::kEachTool && ee.kind != EntityKind::kTool) continue;
        out.push_back(substitute(entry.formula, {{"$e", ee.id}}));
      }
      break;
  }
  return out;
}

namespace {

struct ProjectionFailure {
  std::string reason;
};

Formula project(const Formula& f) {
  switch (f.op()) {
    case Op::kTrue:
    case Op::kFalse:
    case Op::kAtom:
      return f;
    case Op::kNot: return Not(project(f.lhs()));
    case Op::kAnd: return And(project(f.lhs()), project(f.rhs()));
    case Op::kOr: return Or(project(f.lhs()), project(f.rhs()));
    case Op::kImplies: return Implies(project(f.lhs()), project(f.rhs()));
    case Op::kAG: return G(project(f.lhs()));
    case Op::kAF: return F(project(f.lhs()));
    case Op::kAX:
    case Op::kEX:
      return X(project(f.lhs()));
    case Op::kAU: return U(project(f.lhs()), project(f.rhs()));
    case Op::kEF:
    case Op::kEG:
    case Op::kEU:
      throw ProjectionFailure{"existential operator " +
                              std::string(op_keyword(f.op())) +
                              " has no single-trace reading"};
    default:
      throw ProjectionFailure{"LTL operator inside CTL formula"};
  }
}

}  // namespace

std::optional<Formula> witness_target(const Formula& f) {
  if (f.op() == Op::kEF && f.lhs().propositional()) return f.lhs();
  return std::nullopt;
}

Expected<Formula, NotLinearizable> ltl_projection(const Formula& f) {
  if (f.logic() == Logic::kLtl) return f;
  try {
    return project(f);
  } catch (const ProjectionFailure& e) {
    return unexpected(NotLinearizable{witness_target(f).has_value(), e.reason});
  }
}

Expected<Formula, std::string> lift_to_ctl(const Formula& f) {
  if (f.logic() == Logic::kCtl) return f;
  switch (f.op()) {
    case Op::kG: {
      const Formula& body = f.lhs();
      if (body.propositional()) return AG(body);
      if (body.op() == Op::kImplies && body.lhs().propositional() &&
          body.rhs().op() == Op::kF && body.rhs().lhs().propositional()) {
        return AG(Implies(body.lhs(), AF(body.rhs().lhs())));
      }
      break;
    }
    case Op::kF:
      if (f.lhs().propositional()) return AF(f.lhs());
      break;
    case Op::kX:
      if (f.lhs().propositional()) return AX(f.lhs());
      break;
    case Op::kU:
      if (f.lhs().propositional() && f.rhs().propositional()) {
        return AU(f.lhs(), f.rhs());
      }
      break;
    default:
      break;
  }
  return unexpected(std::string("no exact CTL form for ") + render(f));
}

}  // namespace akv::tlogic
