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

#include "akv/scenario.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace akv::scenarios {

using json = nlohmann::ordered_json;
using orchestration::CapabilityProfile;
using orchestration::PlanNode;
using orchestration::PlanTemplate;

std::string ScenarioError::message() const {
  switch (kind) {
    case Kind::kSchemaError: return "schema error at " + detail;
    case Kind::kDanglingReference: return "dangling reference: " + detail;
    case Kind::kCycleDetected: return "cycle in plan " + detail;
    case Kind::kUnknownScenario: return "unknown scenario: " + detail;
    case Kind::kIo: return "cannot read " + detail;
  }
  return detail;
}

namespace {

struct SchemaFailure {
  ScenarioError error;
};

[[noreturn]] void schema(const std::string& path) {
  throw SchemaFailure{{ScenarioError::Kind::kSchemaError, path}};
}

[[noreturn]] void dangling(const std::string& what) {
  throw SchemaFailure{{ScenarioError::Kind::kDanglingReference, what}};
}

const json& need(const json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) schema(path + "." + key);
  return j.at(key);
}

std::string str(const json& j, const char* key, const std::string& path) {
  const json& v = need(j, key, path);
  if (!v.is_string()) schema(path + "." + key);
  return v.get<std::string>();
}

std::string str_or(const json& j, const char* key, const std::string& path,
                   std::string def) {
  if (!j.contains(key)) return def;
  return str(j, key, path);
}

std::uint64_t uint_or(const json& j, const char* key, const std::string& path,
                      std::uint64_t def) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    schema(path + "." + key);
  }
  return v.get<std::uint64_t>();
}

bool bool_or(const json& j, const char* key, const std::string& path, bool def) {
  if (!j.contains(key)) return def;
  if (!j.at(key).is_boolean()) schema(path + "." + key);
  return j.at(key).get<bool>();
}

std::vector<std::string> strings(const json& j, const char* key, const std::string& path) {
  const json& v = need(j, key, path);
  if (!v.is_array()) schema(path + "." + key);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) schema(path + "." + key + "[" + std::to_string(i) + "]");
    out.push_back(v[i].get<std::string>());
  }
  return out;
}

const json& array(const json& j, const char* key, const std::string& path) {
  const json& v = need(j, key, path);
  if (!v.is_array()) schema(path + "." + key);
  return v;
}

Scenario parse(const json& j) {
  if (!j.is_object()) schema("$");
  if (uint_or(j, "v", "$", 0) != 1) schema("$.v");
  Scenario s;
  s.name = str(j, "name", "$");
  s.request = str(j, "request", "$");

  const json& tpl = array(j, "intent_templates", "$");
  for (std::size_t i = 0; i < tpl.size(); ++i) {
    std::string p = "$.intent_templates[" + std::to_string(i) + "]";
    s.intent_templates.push_back({str(tpl[i], "pattern", p), str(tpl[i], "plan", p)});
  }

  const json& plans = need(j, "plans", "$");
  if (!plans.is_object()) schema("$.plans");
  for (const auto& [ref, pj] : plans.items()) {
    std::string p = "$.plans." + ref;
    PlanTemplate plan;
    const json& nodes = array(pj, "nodes", p);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      std::string np = p + ".nodes[" + std::to_string(i) + "]";
      PlanNode n;
      n.id = str(nodes[i], "id", np);
      n.skill = str_or(nodes[i], "skill", np, "");
      n.retry_limit = static_cast<std::uint32_t>(uint_or(nodes[i], "retry_limit", np, 0));
      n.max_fallbacks = static_cast<std::uint32_t>(uint_or(nodes[i], "max_fallbacks", np, 0));
      n.needs_external = bool_or(nodes[i], "needs_external", np, true);
      if (n.needs_external && n.skill.empty()) schema(np + ".skill");
      plan.nodes.push_back(std::move(n));
    }
    const json& edges = array(pj, "edges", p);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const json& e = edges[i];
      if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string()) {
        schema(p + ".edges[" + std::to_string(i) + "]");
      }
      plan.edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
    s.plans.emplace(ref, std::move(plan));
  }

  const json& profiles = array(j, "profiles", "$");
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    std::string p = "$.profiles[" + std::to_string(i) + "]";
    const json& pj = profiles[i];
    CapabilityProfile prof;
    prof.ee_id = str(pj, "ee_id", p);
    auto kind = orchestration::parse_entity_kind(str(pj, "kind", p));
    if (!kind) schema(p + ".kind");
    prof.kind = *kind;
    auto skills = strings(pj, "skills", p);
    prof.skills.insert(skills.begin(), skills.end());
    const json& api = need(pj, "api_metadata", p);
    prof.api_metadata = {str(api, "protocol", p + ".api_metadata"),
                         str(api, "endpoint", p + ".api_metadata"),
                         str(api, "schema", p + ".api_metadata")};
    prof.validated = bool_or(pj, "validated", p, false);
    auto rel = uint_or(pj, "reliability", p, 0);
    if (rel > 100) schema(p + ".reliability");
    prof.reliability = static_cast<int>(rel);
    s.profiles.push_back(std::move(prof));
  }

  const json& behaviors = array(j, "behaviors", "$");
  for (std::size_t i = 0; i < behaviors.size(); ++i) {
    std::string p = "$.behaviors[" + std::to_string(i) + "]";
    simnet::EEBehavior b;
    b.ee_id = str(behaviors[i], "ee", p);
    const json& rules = array(behaviors[i], "rules", p);
    for (std::size_t k = 0; k < rules.size(); ++k) {
      std::string rp = p + ".rules[" + std::to_string(k) + "]";
      simnet::ReactionRule r;
      r.match = str_or(rules[k], "match", rp, "*");
      r.delay = static_cast<std::uint32_t>(uint_or(rules[k], "delay", rp, 1));
      r.jitter = static_cast<std::uint32_t>(uint_or(rules[k], "jitter", rp, 0));
      auto kind = simnet::parse_action(str(rules[k], "action", rp));
      if (!kind) schema(rp + ".action");
      r.action.kind = *kind;
      r.action.payload = str_or(rules[k], "payload", rp, "");
      r.action.code = str_or(rules[k], "code", rp, "");
      r.action.target = str_or(rules[k], "target", rp, "");
      if ((*kind == simnet::ActionKind::kDelegateTo ||
           *kind == simnet::ActionKind::kProxyInvoke) && r.action.target.empty()) {
        schema(rp + ".target");
      }
      b.rules.push_back(std::move(r));
    }
    bool total = std::any_of(b.rules.begin(), b.rules.end(),
                             [](const auto& r) { return r.match == "*"; });
    if (!total) schema(p + ".rules (no default '*' rule)");
    s.behaviors.push_back(std::move(b));
  }

  if (j.contains("validation_policy")) {
    s.validation_policy.min_reliability = static_cast<int>(
        uint_or(j.at("validation_policy"), "min_reliability", "$.validation_policy", 50));
  }
  if (j.contains("protocols")) {
    auto ps = strings(j, "protocols", "$");
    s.protocols = {ps.begin(), ps.end()};
  }
  if (j.contains("enforcement")) {
    const json& e = j.at("enforcement");
    const std::string p = "$.enforcement";
    s.enforcement.vm_gate = bool_or(e, "vm_gate", p, true);
    s.enforcement.dag_membership_gate = bool_or(e, "dag_membership_gate", p, true);
    s.enforcement.dependency_gate = bool_or(e, "dependency_gate", p, true);
    s.enforcement.failure_propagation = bool_or(e, "failure_propagation", p, true);
  }
  if (j.contains("fsm")) {
    const json& f = j.at("fsm");
    s.fsm.ready_gate = bool_or(f, "ready_gate", "$.fsm", true);
    s.fsm.record_previous_state = bool_or(f, "record_previous_state", "$.fsm", true);
  }
  s.fsm.propagate_dependency_failure = s.enforcement.failure_propagation;

  if (j.contains("cancel_schedule")) {
    const json& c = array(j, "cancel_schedule", "$");
    for (std::size_t i = 0; i < c.size(); ++i) {
      std::string p = "$.cancel_schedule[" + std::to_string(i) + "]";
      s.cancel_schedule.push_back({uint_or(c[i], "tick", p, 0), str(c[i], "node", p)});
    }
  }
  if (j.contains("injections")) {
    const json& c = array(j, "injections", "$");
    for (std::size_t i = 0; i < c.size(); ++i) {
      std::string p = "$.injections[" + std::to_string(i) + "]";
      s.injections.push_back({uint_or(c[i], "tick", p, 0), str(c[i], "node", p),
                              str(c[i], "ee", p), str(c[i], "protocol", p)});
    }
  }
  s.tick_budget = uint_or(j, "tick_budget", "$", 100);
  if (s.tick_budget == 0) schema("$.tick_budget");
  s.seed = uint_or(j, "seed", "$", 0);
  return s;
}

void check_references(const Scenario& s) {
  std::set<std::string> ees;
  for (const auto& p : s.profiles) {
    if (!ees.insert(p.ee_id).second) schema("$.profiles (duplicate ee_id " + p.ee_id + ")");
  }
  for (const auto& t : s.intent_templates) {
    if (!s.plans.count(t.plan)) dangling("plan " + t.plan);
  }
  std::set<std::string> plan_nodes;
  for (const auto& [ref, plan] : s.plans) {
    std::vector<std::string> ids;
    for (const auto& n : plan.nodes) {
      ids.push_back(n.id);
      plan_nodes.insert(n.id);
    }
    for (const auto& [a, b] : plan.edges) {
      if (std::find(ids.begin(), ids.end(), a) == ids.end()) dangling("node " + a + " in plan " + ref);
      if (std::find(ids.begin(), ids.end(), b) == ids.end()) dangling("node " + b + " in plan " + ref);
    }
    if (!orchestration::find_cycle(ids, plan.edges).empty()) {
      throw SchemaFailure{{ScenarioError::Kind::kCycleDetected, ref}};
    }
  }
  std::set<std::string> with_behavior;
  for (const auto& b : s.behaviors) {
    if (!ees.count(b.ee_id)) dangling("entity " + b.ee_id);
    with_behavior.insert(b.ee_id);
    for (const auto& r : b.rules) {
      if (!r.action.target.empty() && !ees.count(r.action.target)) {
        dangling("entity " + r.action.target);
      }
    }
  }
  for (const auto& e : ees) {
    if (!with_behavior.count(e)) dangling("behavior for " + e);
  }
  for (const auto& c : s.cancel_schedule) {
    if (!plan_nodes.count(c.node)) dangling("node " + c.node);
  }
  for (const auto& in : s.injections) {
    if (!ees.count(in.ee)) dangling("entity " + in.ee);
  }
}

json to_json(const Scenario& s) {
  json j;
  j["v"] = 1;
  j["name"] = s.name;
  j["request"] = s.request;
  j["intent_templates"] = json::array();
  for (const auto& t : s.intent_templates) {
    j["intent_templates"].push_back({{"pattern", t.pattern}, {"plan", t.plan}});
  }
  j["plans"] = json::object();
  for (const auto& [ref, plan] : s.plans) {
    json pj;
    pj["nodes"] = json::array();
    for (const auto& n : plan.nodes) {
      json nj;
      nj["id"] = n.id;
      nj["skill"] = n.skill;
      nj["retry_limit"] = n.retry_limit;
      nj["max_fallbacks"] = n.max_fallbacks;
      nj["needs_external"] = n.needs_external;
      pj["nodes"].push_back(std::move(nj));
    }
    pj["edges"] = json::array();
    for (const auto& [a, b] : plan.edges) pj["edges"].push_back({a, b});
    j["plans"][ref] = std::move(pj);
  }
  j["profiles"] = json::array();
  for (const auto& p : s.profiles) {
    json pj;
    pj["ee_id"] = p.ee_id;
    pj["kind"] = std::string(orchestration::to_string(p.kind));
    pj["skills"] = std::vector<std::string>(p.skills.begin(), p.skills.end());
    pj["api_metadata"] = {{"protocol", p.api_metadata.protocol},
                          {"endpoint", p.api_metadata.endpoint},
                          {"schema", p.api_metadata.schema}};
    pj["validated"] = p.validated;
    pj["reliability"] = p.reliability;
    j["profiles"].push_back(std::move(pj));
  }
  j["behaviors"] = json::array();
  for (const auto& b : s.behaviors) {
    json bj;
    bj["ee"] = b.ee_id;
    bj["rules"] = json::array();
    for (const auto& r : b.rules) {
      json rj;
      rj["match"] = r.match;
      rj["delay"] = r.delay;
      if (r.jitter) rj["jitter"] = r.jitter;
      rj["action"] = std::string(simnet::to_string(r.action.kind));
      if (!r.action.payload.empty()) rj["payload"] = r.action.payload;
      if (!r.action.code.empty()) rj["code"] = r.action.code;
      if (!r.action.target.empty()) rj["target"] = r.action.target;
      bj["rules"].push_back(std::move(rj));
    }
    j["behaviors"].push_back(std::move(bj));
  }
  j["validation_policy"] = {{"min_reliability", s.validation_policy.min_reliability}};
  j["protocols"] = std::vector<std::string>(s.protocols.begin(), s.protocols.end());
  j["enforcement"] = {{"vm_gate", s.enforcement.vm_gate},
                      {"dag_membership_gate", s.enforcement.dag_membership_gate},
                      {"dependency_gate", s.enforcement.dependency_gate},
                      {"failure_propagation", s.enforcement.failure_propagation}};
  j["fsm"] = {{"ready_gate", s.fsm.ready_gate},
              {"record_previous_state", s.fsm.record_previous_state}};
  j["cancel_schedule"] = json::array();
  for (const auto& c : s.cancel_schedule) {
    j["cancel_schedule"].push_back({{"tick", c.tick}, {"node", c.node}});
  }
  j["injections"] = json::array();
  for (const auto& in : s.injections) {
    j["injections"].push_back(
        {{"tick", in.tick}, {"node", in.node}, {"ee", in.ee}, {"protocol", in.protocol}});
  }
  j["tick_budget"] = s.tick_budget;
  j["seed"] = s.seed;
  return j;
}

}  // namespace

Expected<Scenario, ScenarioError> load_scenario(const std::string& document) {
  json j;
  try {
    j = json::parse(document);
  } catch (const json::exception& e) {
    return unexpected(ScenarioError{ScenarioError::Kind::kSchemaError, std::string("$ (") + e.what() + ")"});
  }
  try {
    Scenario s = parse(j);
    check_references(s);
    return s;
  } catch (const SchemaFailure& f) {
    return unexpected(f.error);
  } catch (const json::exception& e) {
    return unexpected(ScenarioError{ScenarioError::Kind::kSchemaError, std::string("$ (") + e.what() + ")"});
  }
}

std::string dump_scenario(const Scenario& s) { return to_json(s).dump(2) + "\n"; }

Expected<Scenario, ScenarioError> resolve(const std::string& name_or_path) {
  auto names = builtin_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) {
    return builtin(name_or_path);
  }
  std::ifstream in(name_or_path);
  if (!in) return unexpected(ScenarioError{ScenarioError::Kind::kIo, name_or_path});
  std::stringstream buf;
  buf << in.rdbuf();
  return load_scenario(buf.str());
}

const std::vector<Mutation>& all_mutations() {
  static const std::vector<Mutation> all = {
      Mutation::kDisableVmGate, Mutation::kDisableDagMembershipGate,
      Mutation::kDisableDependencyGate, Mutation::kSkipReadyGate,
      Mutation::kForgetPreviousState};
  return all;
}

std::string_view to_string(Mutation m) {
  switch (m) {
    case Mutation::kDisableVmGate: return "DisableVmGate";
    case Mutation::kDisableDagMembershipGate: return "DisableDagMembershipGate";
    case Mutation::kDisableDependencyGate: return "DisableDependencyGate";
    case Mutation::kSkipReadyGate: return "SkipReadyGate";
    case Mutation::kForgetPreviousState: return "ForgetPreviousState";
  }
  return "?";
}

Expected<Scenario, NotApplicable> mutate(const Scenario& s, Mutation m) {
  Scenario out = s;
  bool* flag = nullptr;
  switch (m) {
    case Mutation::kDisableVmGate: flag = &out.enforcement.vm_gate; break;
    case Mutation::kDisableDagMembershipGate: flag = &out.enforcement.dag_membership_gate; break;
    case Mutation::kDisableDependencyGate: flag = &out.enforcement.dependency_gate; break;
    case Mutation::kSkipReadyGate: flag = &out.fsm.ready_gate; break;
    case Mutation::kForgetPreviousState: flag = &out.fsm.record_previous_state; break;
  }
  if (!*flag) return unexpected(NotApplicable{m});
  *flag = false;
  out.name += "+" + std::string(to_string(m));
  return out;
}

const orchestration::PlanTemplate* active_plan(const Scenario& s) {
  orchestration::SessionState session;
  auto intent = orchestration::resolve_intent(s.request, s.intent_templates, session);
  if (!intent) return nullptr;
  auto it = s.plans.find(intent->plan_template_ref);
  return it == s.plans.end() ? nullptr : &it->second;
}

}  // namespace akv::scenarios
