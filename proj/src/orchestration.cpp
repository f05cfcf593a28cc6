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

#include "akv/orchestration.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace akv::orchestration {

using lifecycle::SubTaskState;

std::string_view to_string(ResponseStatus s) {
  switch (s) {
    case ResponseStatus::kSuccess: return "Success";
    case ResponseStatus::kError: return "Error";
    case ResponseStatus::kClarificationNeeded: return "ClarificationNeeded";
  }
  return "?";
}

std::optional<ResponseStatus> parse_status(std::string_view s) {
  for (auto v : {ResponseStatus::kSuccess, ResponseStatus::kError,
                 ResponseStatus::kClarificationNeeded}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

std::string_view to_string(EntityKind k) {
  return k == EntityKind::kAgent ? "agent" : "tool";
}

std::optional<EntityKind> parse_entity_kind(std::string_view s) {
  if (s == "agent") return EntityKind::kAgent;
  if (s == "tool") return EntityKind::kTool;
  return std::nullopt;
}

bool UserTask::respond(Response r) {
  if (response_) return false;
  response_ = std::move(r);
  return true;
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

Expected<Intent, ResolveFailure> resolve_intent(
    const std::string& request, const std::vector<IntentTemplate>& templates,
    SessionState& session) {
  if (request.empty()) {
    return unexpected(ResolveFailure{ResolveFailure::Kind::kInputError, "empty request"});
  }
  session.append("user", request);
  const std::string text = lower(request);
  for (const auto& t : templates) {
    if (!t.pattern.empty() && text.find(lower(t.pattern)) != std::string::npos) {
      Intent intent{t.pattern, {{"request", request}}, t.plan};
      session.append("host", "intent:" + t.pattern);
      return intent;
    }
  }
  std::string hint = "Could not match the request. Try one of:";
  for (const auto& t : templates) hint += " '" + t.pattern + "'";
  session.append("host", hint);
  return unexpected(ResolveFailure{ResolveFailure::Kind::kClarificationNeeded, hint});
}

bool validate_ee(const CapabilityProfile& profile, const ValidationPolicy& policy) {
  return profile.validated && profile.reliability >= policy.min_reliability;
}

DiscoveryResult DiscoveryResult::filtered(const ValidationPolicy& policy) const {
  std::vector<CapabilityProfile> kept;
  for (const auto& p : profiles_) {
    if (validate_ee(p, policy)) kept.push_back(p);
  }
  return DiscoveryResult(query_, std::move(kept));
}

Expected<bool, RegistryFailure> Registry::register_profile(CapabilityProfile profile) {
  if (profiles_.count(profile.ee_id)) {
    return unexpected(RegistryFailure{RegistryFailure::Kind::kDuplicate, profile.ee_id});
  }
  const auto& api = profile.api_metadata;
  if (!protocols_.count(api.protocol) || api.endpoint.empty() || api.schema.empty()) {
    return unexpected(RegistryFailure{RegistryFailure::Kind::kBadMetadata,
                                      profile.ee_id + ": protocol '" + api.protocol + "'"});
  }
  profiles_.emplace(profile.ee_id, std::move(profile));
  return true;
}

DiscoveryResult Registry::discover(const std::set<std::string>& query) const {
  std::vector<CapabilityProfile> out;
  for (const auto& [id, p] : profiles_) {
    if (std::includes(p.skills.begin(), p.skills.end(), query.begin(), query.end())) {
      out.push_back(p);
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.reliability != b.reliability) return a.reliability > b.reliability;
    return a.ee_id < b.ee_id;
  });
  return DiscoveryResult(query, std::move(out));
}

Expected<bool, RegistryFailure> Registry::deregister(
    const EntityId& ee_id, const std::map<SubTaskId, lifecycle::SubTaskRecord>& active) {
  if (!profiles_.count(ee_id)) {
    return unexpected(RegistryFailure{RegistryFailure::Kind::kNotFound, ee_id});
  }
  for (const auto& [id, r] : active) {
    if (r.assigned_ee == ee_id && !lifecycle::is_terminal(r.state)) {
      return unexpected(RegistryFailure{RegistryFailure::Kind::kInUse, id});
    }
  }
  profiles_.erase(ee_id);
  return true;
}

const CapabilityProfile* Registry::find(const EntityId& ee_id) const {
  auto it = profiles_.find(ee_id);
  return it == profiles_.end() ? nullptr : &it->second;
}

std::vector<SubTaskId> TaskDag::topo_order() const {
  std::map<SubTaskId, std::size_t> indeg;
  for (const auto& [id, n] : nodes) indeg[id] = n.dependencies.size();
  std::set<SubTaskId> ready;
  for (const auto& [id, d] : indeg) {
    if (d == 0) ready.insert(id);
  }
  std::vector<SubTaskId> out;
  while (!ready.empty()) {
    SubTaskId id = *ready.begin();
    ready.erase(ready.begin());
    out.push_back(id);
    for (const auto& [from, to] : edges) {
      if (from == id && --indeg[to] == 0) ready.insert(to);
    }
  }
  return out;
}

std::vector<SubTaskId> find_cycle(const std::vector<SubTaskId>& nodes,
                                  const std::vector<std::pair<SubTaskId, SubTaskId>>& edges) {
  std::map<SubTaskId, std::vector<SubTaskId>> adj;
  for (const auto& [a, b] : edges) adj[a].push_back(b);
  std::map<SubTaskId, int> color;
  std::vector<SubTaskId> stack;
  std::vector<SubTaskId> cycle;

  std::function<bool(const SubTaskId&)> dfs = [&](const SubTaskId& v) {
    color[v] = 1;
    stack.push_back(v);
    for (const auto& w : adj[v]) {
      if (color[w] == 1) {
        auto it = std::find(stack.begin(), stack.end(), w);
        cycle.assign(it, stack.end());
        return true;
      }
      if (color[w] == 0 && dfs(w)) return true;
    }
    stack.pop_back();
    color[v] = 2;
    return false;
  };
  for (const auto& v : nodes) {
    if (color[v] == 0 && dfs(v)) return cycle;
  }
  return {};
}

Expected<TaskDag, PlanError> build_task_dag(
    const Intent& intent, const std::map<std::string, PlanTemplate>& plans,
    const DiscoveryResult& discovered) {
  auto it = plans.find(intent.plan_template_ref);
  if (it == plans.end()) {
    return unexpected(PlanError{PlanError::Kind::kUnknownPlan, intent.plan_template_ref});
  }
  const PlanTemplate& plan = it->second;

  std::vector<SubTaskId> ids;
  for (const auto& n : plan.nodes) ids.push_back(n.id);
  for (const auto& [a, b] : plan.edges) {
    if (std::find(ids.begin(), ids.end(), a) == ids.end() ||
        std::find(ids.begin(), ids.end(), b) == ids.end()) {
      return unexpected(PlanError{PlanError::Kind::kDanglingEdge, a + "->" + b});
    }
  }
  if (auto cyc = find_cycle(ids, plan.edges); !cyc.empty()) {
    std::string path;
    for (const auto& v : cyc) path += v + "->";
    return unexpected(PlanError{PlanError::Kind::kCycleDetected, path + cyc.front()});
  }

  TaskDag dag;
  for (const auto& pn : plan.nodes) {
    DagNode n;
    n.id = pn.id;
    n.skill = pn.skill;
    n.needs_external = pn.needs_external;
    n.retry_limit = pn.retry_limit;
    if (pn.needs_external) {
      std::vector<const CapabilityProfile*> matches;
      for (const auto& p : discovered.profiles()) {
        if (p.skills.count(pn.skill)) matches.push_back(&p);
      }
      if (matches.empty()) {
        return unexpected(PlanError{PlanError::Kind::kCapabilityUnsatisfied,
                                    pn.id + " needs '" + pn.skill + "'"});
      }
      n.assigned_ee = matches.front()->ee_id;
      n.protocol = matches.front()->api_metadata.protocol;
      for (std::size_t i = 1; i < matches.size() && n.fallbacks.size() < pn.max_fallbacks; ++i) {
        n.fallbacks.push_back(matches[i]->ee_id);
      }
    }
    dag.nodes.emplace(n.id, std::move(n));
  }
  for (const auto& [a, b] : plan.edges) {
    dag.edges.emplace(a, b);
    dag.nodes[b].dependencies.insert(a);
  }
  return dag;
}

std::vector<SubTaskId> ready_frontier(
    const TaskDag& dag, const std::map<SubTaskId, lifecycle::SubTaskRecord>& records) {
  std::vector<SubTaskId> out;
  for (const auto& [id, n] : dag.nodes) {
    const auto& r = records.at(id);
    if (r.state != SubTaskState::kCreated && r.state != SubTaskState::kAwaitingDependency) {
      continue;
    }
    bool done = std::all_of(n.dependencies.begin(), n.dependencies.end(), [&](const auto& d) {
      return records.at(d).state == SubTaskState::kCompleted;
    });
    if (done) out.push_back(id);
  }
  return out;
}

Expected<Response, MissingResult> aggregate(
    const TaskDag& dag, const std::vector<std::pair<SubTaskId, NodeOutcome>>& results) {
  std::map<SubTaskId, const NodeOutcome*> by_id;
  for (const auto& [id, o] : results) by_id[id] = &o;

  Response r;
  r.status = ResponseStatus::kSuccess;
  for (const auto& id : dag.topo_order()) {
    auto it = by_id.find(id);
    if (it == by_id.end()) return unexpected(MissingResult{id});
    const NodeOutcome& o = *it->second;
    r.per_subtask[id] = std::string(lifecycle::to_string(o.state));
    if (o.state != SubTaskState::kCompleted) {
      if (!r.first_failed) r.first_failed = id;
      r.status = ResponseStatus::kError;
    }
    if (!r.payload.empty()) r.payload += ";";
    r.payload += o.payload;
  }
  if (r.first_failed) r.payload = "sub-task " + *r.first_failed + " ended " + r.per_subtask[*r.first_failed];
  return r;
}

}  // namespace akv::orchestration
