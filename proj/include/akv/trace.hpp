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
#include <vector>

#include "akv/catalog.hpp"
#include "akv/expected.hpp"

namespace akv::trace {

enum class Kind : std::uint8_t {
  kRegistered,
  kReqReceived,
  kIntentResolved,
  kClarifyIntent,
  kDiscover,
  kDagBuilt,
  kTransition,
  kInvoke,
  kBlocked,
  kDelegated,
  kResultReturned,
  kAggregated,
  kRespSent,
  kPending,
  kBudgetExhausted,
};

std::string_view to_string(Kind k);
std::optional<Kind> parse_kind(std::string_view s);

struct NodeSpec {
  std::string id;
  std::vector<std::string> deps;
  std::string ee;
  bool external = true;
  std::uint32_t retry_limit = 0;
  std::vector<std::string> fallbacks;

  friend bool operator==(const NodeSpec&, const NodeSpec&) = default;
};

// One record of the run log. Which fields are meaningful depends on kind;
// the JSON encoding writes only those.
struct Event {
  std::uint64_t seq = 0;
  std::uint64_t tick = 0;
  Kind kind = Kind::kReqReceived;

  std::string node;
  std::string ee;
  std::string text;     // request, intent, question, status, entity kind
  std::string from;     // Transition state / delegating entity
  std::string to;       // Transition state / delegation target
  std::string event;    // Transition event, Blocked reason
  std::string protocol;
  std::string by;       // Invoke origin: "host" or the proxying entity
  std::uint64_t handle = 0;
  bool flag = false;    // Registered vm_ok, ResultReturned ok
  std::string payload;
  std::vector<std::string> skills;
  std::vector<std::string> found;
  std::vector<NodeSpec> nodes;

  friend bool operator==(const Event&, const Event&) = default;
};

using Trace = std::vector<Event>;

std::string encode_line(const Event& e);
std::string encode(const Trace& t);

struct DecodeError {
  std::size_t line = 0;
  std::string message;
};

Expected<Event, DecodeError> decode_line(const std::string& line, std::size_t lineno = 1);
Expected<Trace, DecodeError> decode(const std::string& text);

// Ground atoms true at one step, rendered as Atom::str().
using Snapshot = std::set<std::string>;

struct Replay {
  std::vector<Snapshot> snapshots;  // index = tick
  std::vector<std::string> dag_nodes;
  std::vector<std::string> nodes;   // DAG nodes plus any node named by an Invoke
  std::vector<tlogic::EntityRef> entities;
  // Tick of each Invoke of an entity, used by reports.
  std::map<std::string, std::vector<std::uint64_t>> invoke_ticks;
};

struct ReplayError {
  std::uint64_t seq = 0;
  std::string message;
};

Expected<Replay, ReplayError> replay(const Trace& t);

}  // namespace akv::trace
