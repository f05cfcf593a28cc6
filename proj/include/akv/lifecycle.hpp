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

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "akv/expected.hpp"

namespace akv::lifecycle {

enum class SubTaskState : std::uint8_t {
  kCreated,
  kAwaitingDependency,
  kReady,
  kDispatching,
  kInProgress,
  kCompleted,
  kFailed,
  kRetryScheduled,
  kFallbackSelected,
  kCanceled,
  kError,
};
inline constexpr std::size_t kStateCount = 11;

enum class LifecycleEvent : std::uint8_t {
  kDepsPending,
  kDepsSatisfied,
  kDispatchRequested,
  kInternalStart,
  kDeliveryAck,
  kExecSucceeded,
  kExecFailed,
  kRetryGranted,
  kRetryDenied,
  kFallbackChosen,
  kRecoveryExhausted,
  kCancelRequested,
  kDependencyTerminallyFailed,
};
inline constexpr std::size_t kEventCount = 13;

const std::array<SubTaskState, kStateCount>& all_states();
const std::array<LifecycleEvent, kEventCount>& all_events();

// Canonical upper-case names, e.g. "AWAITING_DEPENDENCY".
std::string_view to_string(SubTaskState s);
std::string_view to_string(LifecycleEvent e);
std::optional<SubTaskState> parse_state(std::string_view name);
std::optional<LifecycleEvent> parse_event(std::string_view name);

bool is_terminal(SubTaskState s);

using SubTaskId = std::string;
using EntityId = std::string;

struct SubTaskConfig {
  std::uint32_t retry_limit = 0;
  std::vector<EntityId> fallback_queue;
  bool needs_external = true;
  std::optional<EntityId> assigned_ee;
};

struct SubTaskRecord {
  SubTaskId id;
  SubTaskState state = SubTaskState::kCreated;
  std::optional<SubTaskState> previous_state;
  std::set<SubTaskId> dependencies;
  std::uint32_t retry_count = 0;
  std::uint32_t retry_limit = 0;
  std::vector<EntityId> fallback_queue;
  bool needs_external = true;
  std::optional<EntityId> assigned_ee;

  bool retry_policy_permits() const { return retry_count < retry_limit; }
  bool has_fallbacks() const { return !fallback_queue.empty(); }

  friend bool operator==(const SubTaskRecord&, const SubTaskRecord&) = default;
};

/// Guard inputs evaluated by the owner of the record (orchestrator or model
/// builder). retry_policy_permits and has_fallbacks must agree with the
/// record; see guards_for().
struct GuardSnapshot {
  bool dependencies_satisfied = false;
  bool has_fallbacks = false;
  bool retry_policy_permits = false;
  bool external_entity_needed = false;
  bool cancel_allowed = true;
  bool dependency_failed = false;
};

/// Guard snapshot whose record-derived bits come from `r`.
GuardSnapshot guards_for(const SubTaskRecord& r, bool dependencies_satisfied,
                         bool dependency_failed = false,
                         bool cancel_allowed = true);

/// Switches used by mutation testing. Defaults give the reference machine.
struct FsmOptions {
  bool record_previous_state = true;
  bool ready_gate = true;
  bool propagate_dependency_failure = true;

  friend bool operator==(const FsmOptions&, const FsmOptions&) = default;
};

struct Rejection {
  SubTaskState state;
  LifecycleEvent event;
  // "terminal", "no_rule", or the name of the failing guard.
  std::string reason;

  friend bool operator==(const Rejection&, const Rejection&) = default;
};

struct DuplicateId {
  SubTaskId id;
};

/// Keeps ids unique across the sub-tasks of one parent task.
class SubTaskFactory {
 public:
  Expected<SubTaskRecord, DuplicateId> new_subtask(
      const SubTaskId& id, std::set<SubTaskId> dependencies,
      const SubTaskConfig& config);

 private:
  std::set<SubTaskId> issued_;
};

Expected<SubTaskRecord, Rejection> transition(const SubTaskRecord& record,
                                              LifecycleEvent event,
                                              const GuardSnapshot& guards,
                                              const FsmOptions& options = {});

/// Events accepted by transition() for this record and snapshot, in enum order.
std::vector<LifecycleEvent> enabled_events(const SubTaskRecord& record,
                                           const GuardSnapshot& guards,
                                           const FsmOptions& options = {});

/// Target state of the table row for (state, event), ignoring guards.
std::optional<SubTaskState> table_target(SubTaskState state,
                                         LifecycleEvent event,
                                         const FsmOptions& options = {});

}  // namespace akv::lifecycle
