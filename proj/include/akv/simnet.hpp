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
#include <random>
#include <set>
#include <string>
#include <vector>

#include "akv/expected.hpp"

namespace akv::simnet {

using EntityId = std::string;
using Handle = std::uint64_t;

inline constexpr std::string_view kHost = "host";

enum class ActionKind : std::uint8_t {
  kSucceed,
  kFail,
  kSilent,
  kDelegateTo,
  kProxyInvoke,
};

std::string_view to_string(ActionKind k);
std::optional<ActionKind> parse_action(std::string_view name);

struct Action {
  ActionKind kind = ActionKind::kSucceed;
  std::string payload;
  std::string code;  // Fail only
  EntityId target;   // DelegateTo / ProxyInvoke
};

// match labels: "*", "node:<id>", "nth:<n>" (n-th message this entity
// receives, 1-based), "upto:<n>", "from:<sender>".
struct ReactionRule {
  std::string match = "*";
  std::uint32_t delay = 1;
  std::uint32_t jitter = 0;
  Action action;
};

struct EEBehavior {
  EntityId ee_id;
  std::vector<ReactionRule> rules;
};

bool rule_matches(const std::string& match, const std::string& node,
                  const std::string& from, std::uint32_t nth);

enum class EventKind : std::uint8_t { kResult, kDelegated, kProxyInvoked };

struct SimEvent {
  std::uint64_t tick = 0;
  EventKind kind = EventKind::kResult;
  Handle handle = 0;
  std::string node;
  EntityId from;  // the entity acting
  EntityId to;    // delegation / proxy target
  bool ok = false;
  std::string payload;

  friend bool operator==(const SimEvent&, const SimEvent&) = default;
};

struct UnknownEntity {
  EntityId ee_id;
};

struct InvalidBudget {};

struct RunFragment {
  std::vector<SimEvent> events;
  std::vector<Handle> pending;
  std::uint64_t clock = 0;
};

class SimEnv {
 public:
  SimEnv(std::vector<EEBehavior> behaviors, std::uint64_t seed);

  std::uint64_t clock() const { return clock_; }
  bool has_entity(const EntityId& ee) const { return behaviors_.count(ee) > 0; }
  bool idle() const { return queue_.empty(); }

  // Due tick of the reaction, or nullopt for a Silent rule.
  Expected<std::optional<std::uint64_t>, UnknownEntity> submit(
      Handle handle, const std::string& node, const EntityId& ee,
      const std::string& payload, const std::string& from = std::string(kHost));

  std::vector<SimEvent> tick();

  Expected<RunFragment, InvalidBudget> run_until(std::uint64_t budget);

  // Handles submitted but not yet resolved by a result.
  std::vector<Handle> outstanding() const;

  // Stops tracking a handle; later reactions on it are dropped.
  void forget(Handle handle);

 private:
  struct Message {
    std::uint64_t due;
    std::uint64_t seq;
    Handle handle;
    std::string node;
    EntityId ee;
    Action action;

    bool operator<(const Message& o) const {
      return std::tie(due, seq) < std::tie(o.due, o.seq);
    }
  };

  std::map<EntityId, EEBehavior> behaviors_;
  std::map<EntityId, std::uint32_t> received_;
  std::set<Message> queue_;
  std::set<Handle> outstanding_;
  std::uint64_t clock_ = 0;
  std::uint64_t seq_ = 0;
  std::mt19937_64 rng_;
};

}  // namespace akv::simnet
