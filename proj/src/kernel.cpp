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

#include "akv/kernel.hpp"

#include <algorithm>

namespace akv::orchestration {

using lifecycle::LifecycleEvent;
using lifecycle::SubTaskState;
using trace::Kind;

std::string_view to_string(InvokeError::Kind k) {
  switch (k) {
    case InvokeError::Kind::kUnvalidatedEntity: return "UnvalidatedEntity";
    case InvokeError::Kind::kSubtaskNotInDag: return "SubtaskNotInDag";
    case InvokeError::Kind::kDependenciesUnmet: return "DependenciesUnmet";
    case InvokeError::Kind::kUnknownProtocol: return "UnknownProtocol";
    case InvokeError::Kind::kUnknownEntity: return "UnknownEntity";
  }
  return "?";
}

Kernel::Kernel(scenarios::Scenario scenario)
    : scenario_(std::move(scenario)),
      registry_(scenario_.protocols),
      env_(scenario_.behaviors, scenario_.seed),
      task_(scenario_.request) {}

trace::Event& Kernel::emit(Kind kind) {
  trace::Event e;
  e.seq = trace_.size();
  e.tick = tick_;
  e.kind = kind;
  trace_.push_back(std::move(e));
  return trace_.back();
}

void Kernel::respond(Response r) {
  auto& e = emit(Kind::kRespSent);
  e.text = std::string(to_string(r.status));
  e.payload = r.payload;
  session_.append("host", r.payload);
  task_.respond(std::move(r));
}

bool Kernel::start() {
  tick_ = 0;
  for (const auto& p : scenario_.profiles) {
    if (!registry_.register_profile(p)) continue;
    auto& e = emit(Kind::kRegistered);
    e.ee = p.ee_id;
    e.text = std::string(to_string(p.kind));
    e.flag = validate_ee(p, scenario_.validation_policy);
  }
  emit(Kind::kReqReceived).text = scenario_.request;

  auto intent = resolve_intent(scenario_.request, scenario_.intent_templates, session_);
  if (!intent) {
    tick_ = 1;
    Response r;
    if (intent.error().kind == ResolveFailure::Kind::kClarificationNeeded) {
      emit(Kind::kClarifyIntent).text = intent.error().message;
      r.status = ResponseStatus::kClarificationNeeded;
    }
    r.payload = intent.error().message;
    respond(std::move(r));
    return false;
  }
  emit(Kind::kIntentResolved).text = intent->intent_id;

  std::set<std::string> skills;
  if (auto it = scenario_.plans.find(intent->plan_template_ref); it != scenario_.plans.end()) {
    for (const auto& n : it->second.nodes) {
      if (n.needs_external) skills.insert(n.skill);
    }
  }
  DiscoveryResult found = registry_.discover({});
  if (scenario_.enforcement.vm_gate) found = found.filtered(scenario_.validation_policy);
  auto& disc = emit(Kind::kDiscover);
  disc.skills.assign(skills.begin(), skills.end());
  for (const auto& p : found.profiles()) {
    if (std::any_of(skills.begin(), skills.end(),
                    [&](const auto& s) { return p.skills.count(s) > 0; })) {
      disc.found.push_back(p.ee_id);
    }
  }

  tick_ = 1;
  auto dag = build_task_dag(*intent, scenario_.plans, found);
  if (!dag) {
    Response r;
    r.payload = "planning failed: " + dag.error().detail;
    respond(std::move(r));
    return false;
  }
  dag_ = std::move(*dag);

  lifecycle::SubTaskFactory factory;
  auto& built = emit(Kind::kDagBuilt);
  for (const auto& id : dag_.topo_order()) {
    const DagNode& n = dag_.nodes.at(id);
    lifecycle::SubTaskConfig cfg;
    cfg.retry_limit = n.retry_limit;
    cfg.fallback_queue = n.fallbacks;
    cfg.needs_external = n.needs_external;
    cfg.assigned_ee = n.assigned_ee;
    records_.emplace(id, factory.new_subtask(id, n.dependencies, cfg).value());
    trace::NodeSpec spec;
    spec.id = id;
    spec.deps.assign(n.dependencies.begin(), n.dependencies.end());
    spec.ee = n.assigned_ee.value_or("");
    spec.external = n.needs_external;
    spec.retry_limit = n.retry_limit;
    spec.fallbacks = n.fallbacks;
    built.nodes.push_back(std::move(spec));
  }
  planned_ = true;
  return true;
}

Expected<simnet::Handle, InvokeError> Kernel::invoke(const EntityId& ee,
                                                     const std::string& protocol,
                                                     const InvocationPayload& payload,
                                                     const std::string& by) {
  using K = InvokeError::Kind;
  const auto& enf = scenario_.enforcement;
  const bool in_dag = dag_.contains(payload.subtask_id);
  if (enf.dag_membership_gate && !in_dag) {
    return unexpected(InvokeError{K::kSubtaskNotInDag, payload.subtask_id});
  }
  const CapabilityProfile* profile = registry_.find(ee);
  if (!profile || !env_.has_entity(ee)) return unexpected(InvokeError{K::kUnknownEntity, ee});
  if (enf.vm_gate && !validate_ee(*profile, scenario_.validation_policy)) {
    return unexpected(InvokeError{K::kUnvalidatedEntity, ee});
  }
  if (enf.dependency_gate && in_dag) {
    for (const auto& d : dag_.nodes.at(payload.subtask_id).dependencies) {
      if (records_.at(d).state != SubTaskState::kCompleted) {
        return unexpected(InvokeError{K::kDependenciesUnmet, d});
      }
    }
  }
  if (!scenario_.protocols.count(protocol) || profile->api_metadata.protocol != protocol) {
    return unexpected(InvokeError{K::kUnknownProtocol, protocol});
  }

  const simnet::Handle h = next_handle_++;
  auto& e = emit(Kind::kInvoke);
  e.node = payload.subtask_id;
  e.ee = ee;
  e.protocol = protocol;
  e.handle = h;
  e.by = by;
  env_.submit(h, payload.subtask_id, ee, payload.body);
  handle_node_[h] = payload.subtask_id;
  return h;
}

bool Kernel::all_terminal() const {
  return std::all_of(records_.begin(), records_.end(),
                     [](const auto& kv) { return lifecycle::is_terminal(kv.second.state); });
}

bool Kernel::apply(lifecycle::SubTaskRecord& r, LifecycleEvent ev,
                   const lifecycle::GuardSnapshot& g) {
  auto next = lifecycle::transition(r, ev, g, scenario_.fsm);
  if (!next) return false;
  auto& e = emit(Kind::kTransition);
  e.node = r.id;
  e.from = std::string(lifecycle::to_string(r.state));
  e.to = std::string(lifecycle::to_string(next->state));
  e.event = std::string(lifecycle::to_string(ev));
  r = std::move(*next);
  return true;
}

void Kernel::dispatch(lifecycle::SubTaskRecord& r, const lifecycle::GuardSnapshot& g) {
  if (!r.needs_external) {
    const simnet::Handle h = next_handle_++;
    auto& e = emit(Kind::kInvoke);
    e.node = r.id;
    e.protocol = "internal";
    e.handle = h;
    e.by = "host";
    apply(r, LifecycleEvent::kInternalStart, g);
    return;
  }
  EntityId ee = r.state == SubTaskState::kFallbackSelected ? r.fallback_queue.front()
                                                             : r.assigned_ee.value_or("");
  const CapabilityProfile* p = registry_.find(ee);
  std::string protocol = p ? p->api_metadata.protocol : "";
  auto h = invoke(ee, protocol, {r.id, scenario_.request});
  if (!h) {
    auto& b = emit(Kind::kBlocked);
    b.node = r.id;
    b.ee = ee;
    b.event = std::string(to_string(h.error().kind));
    if (r.state == SubTaskState::kFallbackSelected) {
      apply(r, LifecycleEvent::kRecoveryExhausted, g);
    } else {
      apply(r, LifecycleEvent::kCancelRequested, g);
    }
    return;
  }
  current_handle_[r.id] = *h;
  inbox_.erase(r.id);
  apply(r, LifecycleEvent::kDispatchRequested, g);
}

void Kernel::step_node(lifecycle::SubTaskRecord& r) {
  bool deps_done = true, dep_failed = false;
  for (const auto& d : r.dependencies) {
    auto s = records_.at(d).state;
    deps_done &= s == SubTaskState::kCompleted;
    dep_failed |= s == SubTaskState::kError || s == SubTaskState::kCanceled;
  }
  const bool deps_guard = deps_done || !scenario_.enforcement.dependency_gate;
  const auto g = lifecycle::guards_for(r, deps_guard, dep_failed);

  switch (r.state) {
    case SubTaskState::kCreated:
    case SubTaskState::kAwaitingDependency:
      if (deps_guard) {
        if (scenario_.fsm.ready_gate) {
          apply(r, LifecycleEvent::kDepsSatisfied, g);
        } else {
          dispatch(r, g);
        }
      } else if (r.state == SubTaskState::kCreated) {
        apply(r, LifecycleEvent::kDepsPending, g);
      } else if (dep_failed) {
        apply(r, LifecycleEvent::kDependencyTerminallyFailed, g);
      }
      break;
    case SubTaskState::kReady:
    case SubTaskState::kRetryScheduled:
    case SubTaskState::kFallbackSelected:
      dispatch(r, g);
      break;
    case SubTaskState::kDispatching:
      apply(r, LifecycleEvent::kDeliveryAck, g);
      break;
    case SubTaskState::kInProgress:
      if (!r.needs_external) {
        auto& e = emit(Kind::kResultReturned);
        e.node = r.id;
        e.handle = current_handle_[r.id];
        e.flag = true;
        e.payload = r.id;
        payloads_[r.id] = r.id;
        apply(r, LifecycleEvent::kExecSucceeded, g);
      } else if (auto it = inbox_.find(r.id); it != inbox_.end()) {
        const bool ok = it->second.first;
        if (ok) payloads_[r.id] = it->second.second;
        inbox_.erase(it);
        apply(r, ok ? LifecycleEvent::kExecSucceeded : LifecycleEvent::kExecFailed, g);
      }
      break;
    case SubTaskState::kFailed:
      if (g.retry_policy_permits) {
        apply(r, LifecycleEvent::kRetryGranted, g);
      } else if (g.has_fallbacks) {
        apply(r, LifecycleEvent::kFallbackChosen, g);
      } else {
        apply(r, LifecycleEvent::kRecoveryExhausted, g);
      }
      break;
    case SubTaskState::kCompleted:
    case SubTaskState::kCanceled:
    case SubTaskState::kError:
      break;
  }
}

void Kernel::absorb_sim_events() {
  std::vector<simnet::SimEvent> events;
  while (env_.clock() < tick_) {
    auto evs = env_.tick();
    events.insert(events.end(), evs.begin(), evs.end());
  }
  for (const auto& ev : events) {
    auto owner = handle_node_.find(ev.handle);
    if (owner == handle_node_.end()) continue;
    const SubTaskId& node = owner->second;
    const bool injected = injected_.count(ev.handle) > 0;
    if (!injected) {
      auto cur = current_handle_.find(node);
      if (cur == current_handle_.end() || cur->second != ev.handle ||
          lifecycle::is_terminal(records_.at(node).state)) {
        continue;
      }
    }
    switch (ev.kind) {
      case simnet::EventKind::kResult: {
        auto& e = emit(Kind::kResultReturned);
        e.node = node;
        e.ee = ev.from;
        e.handle = ev.handle;
        e.flag = ev.ok;
        e.payload = ev.payload;
        if (!injected) inbox_[node] = {ev.ok, ev.payload};
        break;
      }
      case simnet::EventKind::kDelegated: {
        auto& e = emit(Kind::kDelegated);
        e.node = node;
        e.from = ev.from;
        e.to = ev.to;
        e.handle = ev.handle;
        break;
      }
      case simnet::EventKind::kProxyInvoked: {
        const CapabilityProfile* p = registry_.find(ev.to);
        auto& e = emit(Kind::kInvoke);
        e.node = node;
        e.ee = ev.to;
        e.protocol = p ? p->api_metadata.protocol : "";
        e.handle = ev.handle;
        e.by = ev.from;
        break;
      }
    }
  }
}

bool Kernel::step() {
  if (!planned_ || all_terminal()) return false;
  ++tick_;
  absorb_sim_events();

  for (const auto& in : scenario_.injections) {
    if (in.tick != tick_) continue;
    auto h = invoke(in.ee, in.protocol, {in.node, "injected"});
    if (h) {
      injected_.insert(*h);
    } else {
      auto& b = emit(Kind::kBlocked);
      b.node = in.node;
      b.ee = in.ee;
      b.event = std::string(to_string(h.error().kind));
    }
  }

  std::set<SubTaskId> moved;
  for (const auto& c : scenario_.cancel_schedule) {
    if (c.tick != tick_) continue;
    auto it = records_.find(c.node);
    if (it == records_.end()) continue;
    auto g = lifecycle::guards_for(it->second, false);
    if (apply(it->second, LifecycleEvent::kCancelRequested, g)) {
      moved.insert(c.node);
      if (auto h = current_handle_.find(c.node); h != current_handle_.end()) {
        env_.forget(h->second);
      }
    }
  }

  for (auto& [id, r] : records_) {
    if (!moved.count(id)) step_node(r);
  }
  return !all_terminal();
}

RunResult Kernel::run() {
  RunResult out;
  if (start()) {
    // Execution begins on tick 2.
    tick_ = 1;
    bool running = true;
    while (running && tick_ < scenario_.tick_budget) running = step();
    if (!all_terminal()) {
      for (auto h : env_.outstanding()) {
        auto it = handle_node_.find(h);
        if (it == handle_node_.end()) continue;
        auto& e = emit(Kind::kPending);
        e.node = it->second;
        e.handle = h;
      }
      emit(Kind::kBudgetExhausted);
      out.budget_exhausted = true;
      Response r;
      r.payload = "tick budget exhausted at tick " + std::to_string(tick_);
      for (const auto& [id, rec] : records_) {
        r.per_subtask[id] = std::string(lifecycle::to_string(rec.state));
      }
      task_.respond(r);
    } else {
      ++tick_;
      emit(Kind::kAggregated);
      std::vector<std::pair<SubTaskId, NodeOutcome>> results;
      for (const auto& id : dag_.topo_order()) {
        results.emplace_back(id, NodeOutcome{records_.at(id).state, payloads_[id]});
      }
      Response r = aggregate(dag_, results).value();
      ++tick_;
      respond(std::move(r));
    }
  }
  out.response = *task_.response();
  out.trace = trace_;
  out.records = records_;
  out.session = session_;
  return out;
}

RunResult run_task(const scenarios::Scenario& scenario) {
  Kernel k(scenario);
  return k.run();
}

}  // namespace akv::orchestration
