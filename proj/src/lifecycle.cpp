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

#include "akv/lifecycle.hpp"

#include <algorithm>

namespace akv::lifecycle {
namespace {

using S = SubTaskState;
using E = LifecycleEvent;

constexpr std::array<std::string_view, kStateCount> kStateNames = {
    "CREATED",   "AWAITING_DEPENDENCY", "READY",           "DISPATCHING",
    "IN_PROGRESS", "COMPLETED",         "FAILED",          "RETRY_SCHEDULED",
    "FALLBACK_SELECTED", "CANCELED",    "ERROR",
};

constexpr std::array<std::string_view, kEventCount> kEventNames = {
    "DepsPending",      "DepsSatisfied",  "DispatchRequested",
    "InternalStart",    "DeliveryAck",    "ExecSucceeded",
    "ExecFailed",       "RetryGranted",   "RetryDenied",
    "FallbackChosen",   "RecoveryExhausted", "CancelRequested",
    "DependencyTerminallyFailed",
};

// One row of the transition table. `guard` returns the name of the first
// failing guard, or nullptr when the row may fire.
struct Row {
  S target;
  const char* (*guard)(const GuardSnapshot&);
};

const char* no_guard(const GuardSnapshot&) { return nullptr; }

const char* deps_unsatisfied(const GuardSnapshot& g) {
  return g.dependencies_satisfied ? "dependencies_satisfied" : nullptr;
}
const char* deps_satisfied(const GuardSnapshot& g) {
  return g.dependencies_satisfied ? nullptr : "dependencies_satisfied";
}
const char* dep_failed(const GuardSnapshot& g) {
  return g.dependency_failed ? nullptr : "dependency_failed";
}
const char* external(const GuardSnapshot& g) {
  return g.external_entity_needed ? nullptr : "external_entity_needed";
}
const char* internal(const GuardSnapshot& g) {
  return g.external_entity_needed ? "external_entity_needed" : nullptr;
}
const char* deps_and_external(const GuardSnapshot& g) {
  if (auto* r = deps_satisfied(g)) return r;
  return external(g);
}
const char* deps_and_internal(const GuardSnapshot& g) {
  if (auto* r = deps_satisfied(g)) return r;
  return internal(g);
}
const char* retry_permits(const GuardSnapshot& g) {
  return g.retry_policy_permits ? nullptr : "retry_policy_permits";
}
const char* fallback_only(const GuardSnapshot& g) {
  if (!g.has_fallbacks) return "has_fallbacks";
  return g.retry_policy_permits ? "retry_policy_permits" : nullptr;
}
const char* nothing_left(const GuardSnapshot& g) {
  if (g.retry_policy_permits) return "retry_policy_permits";
  return g.has_fallbacks ? "has_fallbacks" : nullptr;
}
const char* cancel_allowed(const GuardSnapshot& g) {
  return g.cancel_allowed ? nullptr : "cancel_allowed";
}

std::optional<Row> lookup(S s, E e, const FsmOptions& opt) {
  switch (s) {
    case S::kCreated:
      switch (e) {
        case E::kDepsPending: return Row{S::kAwaitingDependency, deps_unsatisfied};
        case E::kDepsSatisfied: return Row{S::kReady, deps_satisfied};
        case E::kCancelRequested: return Row{S::kCanceled, cancel_allowed};
        case E::kDispatchRequested:
          if (!opt.ready_gate) return Row{S::kDispatching, deps_and_external};
          break;
        case E::kInternalStart:
          if (!opt.ready_gate) return Row{S::kInProgress, deps_and_internal};
          break;
        default: break;
      }
      break;
    case S::kAwaitingDependency:
      switch (e) {
        case E::kDepsSatisfied: return Row{S::kReady, deps_satisfied};
        case E::kDependencyTerminallyFailed:
          if (opt.propagate_dependency_failure) return Row{S::kCanceled, dep_failed};
          break;
        case E::kCancelRequested: return Row{S::kCanceled, cancel_allowed};
        case E::kDispatchRequested:
          if (!opt.ready_gate) return Row{S::kDispatching, deps_and_external};
          break;
        case E::kInternalStart:
          if (!opt.ready_gate) return Row{S::kInProgress, deps_and_internal};
          break;
        default: break;
      }
      break;
    case S::kReady:
      switch (e) {
        case E::kDispatchRequested: return Row{S::kDispatching, external};
        case E::kInternalStart: return Row{S::kInProgress, internal};
        case E::kCancelRequested: return Row{S::kCanceled, cancel_allowed};
        default: break;
      }
      break;
    case S::kDispatching:
      if (e == E::kDeliveryAck) return Row{S::kInProgress, no_guard};
      break;
    case S::kInProgress:
      switch (e) {
        case E::kExecSucceeded: return Row{S::kCompleted, no_guard};
        case E::kExecFailed: return Row{S::kFailed, no_guard};
        case E::kCancelRequested: return Row{S::kCanceled, cancel_allowed};
        default: break;
      }
      break;
    case S::kFailed:
      switch (e) {
        case E::kRetryGranted: return Row{S::kRetryScheduled, retry_permits};
        case E::kFallbackChosen: return Row{S::kFallbackSelected, fallback_only};
        case E::kRecoveryExhausted: return Row{S::kError, nothing_left};
        case E::kRetryDenied: return Row{S::kError, nothing_left};
        default: break;
      }
      break;
    case S::kRetryScheduled:
      if (e == E::kDispatchRequested) return Row{S::kDispatching, no_guard};
      break;
    case S::kFallbackSelected:
      switch (e) {
        case E::kDispatchRequested: return Row{S::kDispatching, no_guard};
        case E::kRecoveryExhausted: return Row{S::kFailed, no_guard};
        case E::kCancelRequested: return Row{S::kCanceled, no_guard};
        default: break;
      }
      break;
    case S::kCompleted:
    case S::kCanceled:
    case S::kError:
      break;
  }
  return std::nullopt;
}

}  // namespace

const std::array<SubTaskState, kStateCount>& all_states() {
  static const std::array<SubTaskState, kStateCount> states = [] {
    std::array<SubTaskState, kStateCount> a{};
    for (std::size_t i = 0; i < kStateCount; ++i) a[i] = static_cast<S>(i);
    return a;
  }();
  return states;
}

const std::array<LifecycleEvent, kEventCount>& all_events() {
  static const std::array<LifecycleEvent, kEventCount> events = [] {
    std::array<LifecycleEvent, kEventCount> a{};
    for (std::size_t i = 0; i < kEventCount; ++i) a[i] = static_cast<E>(i);
    return a;
  }();
  return events;
}

std::string_view to_string(SubTaskState s) {
  return kStateNames[static_cast<std::size_t>(s)];
}
std::string_view to_string(LifecycleEvent e) {
  return kEventNames[static_cast<std::size_t>(e)];
}

std::optional<SubTaskState> parse_state(std::string_view name) {
  auto it = std::find(kStateNames.begin(), kStateNames.end(), name);
  if (it == kStateNames.end()) return std::nullopt;
  return static_cast<S>(it - kStateNames.begin());
}

std::optional<LifecycleEvent> parse_event(std::string_view name) {
  auto it = std::find(kEventNames.begin(), kEventNames.end(), name);
  if (it == kEventNames.end()) return std::nullopt;
  return static_cast<E>(it - kEventNames.begin());
}

bool is_terminal(SubTaskState s) {
  return s == S::kCompleted || s == S::kError || s == S::kCanceled;
}

GuardSnapshot guards_for(const SubTaskRecord& r, bool dependencies_satisfied,
                         bool dependency_failed, bool cancel_allowed) {
  GuardSnapshot g;
  g.dependencies_satisfied = dependencies_satisfied;
  g.has_fallbacks = r.has_fallbacks();
  g.retry_policy_permits = r.retry_policy_permits();
  g.external_entity_needed = r.needs_external;
  g.cancel_allowed = cancel_allowed;
  g.dependency_failed = dependency_failed;
  return g;
}

Expected<SubTaskRecord, DuplicateId> SubTaskFactory::new_subtask(
    const SubTaskId& id, std::set<SubTaskId> dependencies,
    const SubTaskConfig& config) {
  if (!issued_.insert(id).second) return unexpected(DuplicateId{id});
  SubTaskRecord r;
  r.id = id;
  r.dependencies = std::move(dependencies);
  r.retry_limit = config.retry_limit;
  r.fallback_queue = config.fallback_queue;
  r.needs_external = config.needs_external;
  r.assigned_ee = config.assigned_ee;
  return r;
}

std::optional<SubTaskState> table_target(SubTaskState state,
                                         LifecycleEvent event,
                                         const FsmOptions& options) {
  if (auto row = lookup(state, event, options)) return row->target;
  return std::nullopt;
}

Expected<SubTaskRecord, Rejection> transition(const SubTaskRecord& record,
                                              LifecycleEvent event,
                                              const GuardSnapshot& guards,
                                              const FsmOptions& options) {
  if (is_terminal(record.state)) {
    return unexpected(Rejection{record.state, event, "terminal"});
  }
  auto row = lookup(record.state, event, options);
  if (!row) return unexpected(Rejection{record.state, event, "no_rule"});
  if (const char* failing = row->guard(guards)) {
    return unexpected(Rejection{record.state, event, failing});
  }

  SubTaskRecord next = record;
  if (event == E::kDispatchRequested) {
    if (record.state == S::kFallbackSelected) {
      if (next.fallback_queue.empty()) {
        return unexpected(Rejection{record.state, event, "has_fallbacks"});
      }
      next.assigned_ee = next.fallback_queue.front();
      next.fallback_queue.erase(next.fallback_queue.begin());
    }
    if (next.needs_external && !next.assigned_ee) {
      return unexpected(Rejection{record.state, event, "assigned_ee"});
    }
  }
  if (event == E::kRecoveryExhausted && record.state == S::kFallbackSelected &&
      !next.fallback_queue.empty()) {
    next.fallback_queue.erase(next.fallback_queue.begin());
  }
  if (event == E::kRetryGranted) ++next.retry_count;

  if (options.record_previous_state) next.previous_state = record.state;
  next.state = row->target;
  return next;
}

std::vector<LifecycleEvent> enabled_events(const SubTaskRecord& record,
                                           const GuardSnapshot& guards,
                                           const FsmOptions& options) {
  std::vector<LifecycleEvent> out;
  for (auto e : all_events()) {
    if (transition(record, e, guards, options)) out.push_back(e);
  }
  return out;
}

}  // namespace akv::lifecycle
