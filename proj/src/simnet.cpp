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

#include "akv/simnet.hpp"

#include <charconv>
#include <tuple>

namespace akv::simnet {

std::string_view to_string(ActionKind k) {
  switch (k) {
    case ActionKind::kSucceed: return "Succeed";
    case ActionKind::kFail: return "Fail";
    case ActionKind::kSilent: return "Silent";
    case ActionKind::kDelegateTo: return "DelegateTo";
    case ActionKind::kProxyInvoke: return "ProxyInvoke";
  }
  return "?";
}

std::optional<ActionKind> parse_action(std::string_view name) {
  for (auto k : {ActionKind::kSucceed, ActionKind::kFail, ActionKind::kSilent,
                 ActionKind::kDelegateTo, ActionKind::kProxyInvoke}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

namespace {

std::optional<std::uint32_t> number_after(std::string_view s, std::string_view prefix) {
  if (s.substr(0, prefix.size()) != prefix) return std::nullopt;
  std::uint32_t n = 0;
  auto rest = s.substr(prefix.size());
  auto [p, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), n);
  if (ec != std::errc() || p != rest.data() + rest.size()) return std::nullopt;
  return n;
}

}  // namespace

bool rule_matches(const std::string& match, const std::string& node,
                  const std::string& from, std::uint32_t nth) {
  std::string_view m = match;
  if (m == "*") return true;
  if (m.starts_with("node:")) return m.substr(5) == node;
  if (m.starts_with("from:")) return m.substr(5) == from;
  if (auto n = number_after(m, "nth:")) return nth == *n;
  if (auto n = number_after(m, "upto:")) return nth <= *n;
  return false;
}

SimEnv::SimEnv(std::vector<EEBehavior> behaviors, std::uint64_t seed)
    : rng_(seed) {
  for (auto& b : behaviors) behaviors_[b.ee_id] = std::move(b);
}

Expected<std::optional<std::uint64_t>, UnknownEntity> SimEnv::submit(
    Handle handle, const std::string& node, const EntityId& ee,
    const std::string& payload, const std::string& from) {
  auto it = behaviors_.find(ee);
  if (it == behaviors_.end()) return unexpected(UnknownEntity{ee});
  outstanding_.insert(handle);
  const std::uint32_t nth = ++received_[ee];

  const ReactionRule* rule = nullptr;
  for (const auto& r : it->second.rules) {
    if (rule_matches(r.match, node, from, nth)) {
      rule = &r;
      break;
    }
  }
  if (!rule || rule->action.kind == ActionKind::kSilent) return std::optional<std::uint64_t>{};

  std::uint64_t delay = std::max<std::uint32_t>(rule->delay, 1);
  if (rule->jitter) {
    delay += std::uniform_int_distribution<std::uint32_t>(0, rule->jitter)(rng_);
  }
  Action action = rule->action;
  if (action.payload.empty() && action.kind != ActionKind::kFail) action.payload = payload;
  const std::uint64_t due = clock_ + delay;
  queue_.insert(Message{due, seq_++, handle, node, ee, std::move(action)});
  return std::optional<std::uint64_t>{due};
}

std::vector<SimEvent> SimEnv::tick() {
  ++clock_;
  std::vector<SimEvent> out;
  while (!queue_.empty() && queue_.begin()->due <= clock_) {
    Message m = *queue_.begin();
    queue_.erase(queue_.begin());
    if (!outstanding_.count(m.handle)) continue;

    SimEvent ev;
    ev.tick = clock_;
    ev.handle = m.handle;
    ev.node = m.node;
    ev.from = m.ee;
    switch (m.action.kind) {
      case ActionKind::kSucceed:
      case ActionKind::kFail:
        ev.kind = EventKind::kResult;
        ev.ok = m.action.kind == ActionKind::kSucceed;
        ev.payload = ev.ok ? m.action.payload : m.action.code;
        outstanding_.erase(m.handle);
        out.push_back(std::move(ev));
        break;
      case ActionKind::kDelegateTo:
      case ActionKind::kProxyInvoke: {
        ev.kind = m.action.kind == ActionKind::kDelegateTo ? EventKind::kDelegated
                                                           : EventKind::kProxyInvoked;
        ev.to = m.action.target;
        ev.payload = m.action.payload;
        out.push_back(ev);
        if (!submit(m.handle, m.node, m.action.target, m.action.payload, m.ee)) {
          SimEvent fail = ev;
          fail.kind = EventKind::kResult;
          fail.to.clear();
          fail.ok = false;
          fail.payload = "unknown_entity";
          outstanding_.erase(m.handle);
          out.push_back(std::move(fail));
        }
        break;
      }
      case ActionKind::kSilent:
        break;
    }
  }
  return out;
}

Expected<RunFragment, InvalidBudget> SimEnv::run_until(std::uint64_t budget) {
  if (budget == 0) return unexpected(InvalidBudget{});
  RunFragment frag;
  for (std::uint64_t i = 0; i < budget && !queue_.empty(); ++i) {
    auto evs = tick();
    frag.events.insert(frag.events.end(), evs.begin(), evs.end());
  }
  frag.pending = outstanding();
  frag.clock = clock_;
  return frag;
}

std::vector<Handle> SimEnv::outstanding() const {
  return {outstanding_.begin(), outstanding_.end()};
}

void SimEnv::forget(Handle handle) { outstanding_.erase(handle); }

}  // namespace akv::simnet
