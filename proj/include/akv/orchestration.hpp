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

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "akv/expected.hpp"
#include "akv/lifecycle.hpp"

namespace akv::orchestration {

using lifecycle::EntityId;
using lifecycle::SubTaskId;

enum class ResponseStatus : std::uint8_t { kSuccess, kError, kClarificationNeeded };
std::string_view to_string(ResponseStatus s);
std::optional<ResponseStatus> parse_status(std::string_view s);

struct Response {
  ResponseStatus status = ResponseStatus::kError;
  std::string payload;
  std::map<SubTaskId, std::string> per_subtask;
  std::optional<SubTaskId> first_failed;
};

class UserTask {
 public:
  explicit UserTask(std::string request) : request_(std::move(request)) {}
  const std::string& request() const { return request_; }
  const std::optional<Response>& response() const { return response_; }
  // False when a response was already recorded.
  bool respond(Response r);

 private:
  std::string request_;
  std::optional<Response> response_;
};

struct SessionState {
  std::vector<std::pair<std::string, std::string>> dialogue_history;
  std::map<EntityId, std::string> credentials;

  void append(std::string speaker, std::string text) {
    dialogue_history.emplace_back(std::move(speaker), std::move(text));
  }
};

struct IntentTemplate {
  std::string pattern;
  std::string plan;
};

struct Intent {
  std::string intent_id;
  std::map<std::string, std::string> parameters;
  std::string plan_template_ref;
};

struct ResolveFailure {
  enum class Kind : std::uint8_t { kInputError, kClarificationNeeded } kind;
  std::string message;
};

Expected<Intent, ResolveFailure> resolve_intent(
    const std::string& request, const std::vector<IntentTemplate>& templates,
    SessionState& session);

enum class EntityKind : std::uint8_t { kAgent, kTool };
std::string_view to_string(EntityKind k);
std::optional<EntityKind> parse_entity_kind(std::string_view s);

struct ApiMetadata {
  std::string protocol;
  std::string endpoint;
  std::string schema;
};

struct CapabilityProfile {
  EntityId ee_id;
  EntityKind kind = EntityKind::kAgent;
  std::set<std::string> skills;
  ApiMetadata api_metadata;
  bool validated = false;
  int reliability = 0;
};

struct ValidationPolicy {
  int min_reliability = 50;
};

bool validate_ee(const CapabilityProfile& profile, const ValidationPolicy& policy);

struct RegistryFailure {
  enum class Kind : std::uint8_t { kDuplicate, kBadMetadata, kNotFound, kInUse } kind;
  std::string detail;
};

class Registry;

// Discovery output. Only a Registry can produce one, so a plan built from
// it has provably passed through discovery.
class DiscoveryResult {
 public:
  const std::vector<CapabilityProfile>& profiles() const { return profiles_; }
  const std::set<std::string>& query() const { return query_; }
  DiscoveryResult filtered(const ValidationPolicy& policy) const;

 private:
  friend class Registry;
  DiscoveryResult(std::set<std::string> q, std::vector<CapabilityProfile> p)
      : query_(std::move(q)), profiles_(std::move(p)) {}
  std::set<std::string> query_;
  std::vector<CapabilityProfile> profiles_;
};

class Registry {
 public:
  explicit Registry(std::set<std::string> protocols = {"a2a", "mcp"})
      : protocols_(std::move(protocols)) {}

  Expected<bool, RegistryFailure> register_profile(CapabilityProfile profile);
  // Profiles whose skills include every queried skill, by reliability
  // descending then ee_id.
  DiscoveryResult discover(const std::set<std::string>& query) const;
  Expected<bool, RegistryFailure> deregister(
      const EntityId& ee_id,
      const std::map<SubTaskId, lifecycle::SubTaskRecord>& active = {});

  const CapabilityProfile* find(const EntityId& ee_id) const;
  const std::map<EntityId, CapabilityProfile>& profiles() const { return profiles_; }
  const std::set<std::string>& protocols() const { return protocols_; }

 private:
  std::set<std::string> protocols_;
  std::map<EntityId, CapabilityProfile> profiles_;
};

struct PlanNode {
  SubTaskId id;
  std::string skill;
  std::uint32_t retry_limit = 0;
  std::uint32_t max_fallbacks = 0;
  bool needs_external = true;
};

struct PlanTemplate {
  std::vector<PlanNode> nodes;
  std::vector<std::pair<SubTaskId, SubTaskId>> edges;
};

struct DagNode {
  SubTaskId id;
  std::string skill;
  std::set<SubTaskId> dependencies;
  std::optional<EntityId> assigned_ee;
  std::string protocol;
  bool needs_external = true;
  std::uint32_t retry_limit = 0;
  std::vector<EntityId> fallbacks;
};

struct TaskDag {
  std::map<SubTaskId, DagNode> nodes;
  std::set<std::pair<SubTaskId, SubTaskId>> edges;

  bool contains(const SubTaskId& id) const { return nodes.count(id) > 0; }
  // Kahn order, ties broken by id.
  std::vector<SubTaskId> topo_order() const;
};

// Returns the node ids of one cycle, empty if acyclic.
std::vector<SubTaskId> find_cycle(const std::vector<SubTaskId>& nodes,
                                  const std::vector<std::pair<SubTaskId, SubTaskId>>& edges);

struct PlanError {
  enum class Kind : std::uint8_t {
    kUnknownPlan,
    kCycleDetected,
    kCapabilityUnsatisfied,
    kDanglingEdge,
  } kind;
  std::string detail;
};

Expected<TaskDag, PlanError> build_task_dag(
    const Intent& intent, const std::map<std::string, PlanTemplate>& plans,
    const DiscoveryResult& discovered);

std::vector<SubTaskId> ready_frontier(
    const TaskDag& dag, const std::map<SubTaskId, lifecycle::SubTaskRecord>& records);

struct NodeOutcome {
  lifecycle::SubTaskState state;
  std::string payload;
};

struct MissingResult {
  SubTaskId id;
};

Expected<Response, MissingResult> aggregate(
    const TaskDag& dag, const std::vector<std::pair<SubTaskId, NodeOutcome>>& results);

}  // namespace akv::orchestration
