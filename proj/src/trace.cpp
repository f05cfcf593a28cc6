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

#include "akv/trace.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include <json.hpp>

#include "akv/lifecycle.hpp"

namespace akv::trace {

using json = nlohmann::ordered_json;
using lifecycle::SubTaskState;

namespace {

constexpr std::array<std::string_view, 15> kKindNames = {
    "Registered", "ReqReceived",    "IntentResolved", "ClarifyIntent",
    "Discover",   "DagBuilt",       "Transition",     "Invoke",
    "Blocked",    "Delegated",      "ResultReturned", "Aggregated",
    "RespSent",   "Pending",        "BudgetExhausted",
};

}  // namespace

std::string_view to_string(Kind k) { return kKindNames[static_cast<std::size_t>(k)]; }

std::optional<Kind> parse_kind(std::string_view s) {
  auto it = std::find(kKindNames.begin(), kKindNames.end(), s);
  if (it == kKindNames.end()) return std::nullopt;
  return static_cast<Kind>(it - kKindNames.begin());
}

std::string encode_line(const Event& e) {
  json j;
  j["seq"] = e.seq;
  j["tick"] = e.tick;
  j["kind"] = std::string(to_string(e.kind));
  switch (e.kind) {
    case Kind::kRegistered:
      j["ee"] = e.ee;
      j["ee_kind"] = e.text;
      j["vm_ok"] = e.flag;
      break;
    case Kind::kReqReceived: j["request"] = e.text; break;
    case Kind::kIntentResolved: j["intent"] = e.text; break;
    case Kind::kClarifyIntent: j["question"] = e.text; break;
    case Kind::kDiscover:
      j["skills"] = e.skills;
      j["found"] = e.found;
      break;
    case Kind::kDagBuilt: {
      json nodes = json::array();
      for (const auto& n : e.nodes) {
        json o;
        o["id"] = n.id;
        o["deps"] = n.deps;
        o["ee"] = n.ee;
        o["external"] = n.external;
        o["retry_limit"] = n.retry_limit;
        o["fallbacks"] = n.fallbacks;
        nodes.push_back(std::move(o));
      }
      j["nodes"] = std::move(nodes);
      break;
    }
    case Kind::kTransition:
      j["node"] = e.node;
      j["from"] = e.from;
      j["to"] = e.to;
      j["event"] = e.event;
      break;
    case Kind::kInvoke:
      j["node"] = e.node;
      j["ee"] = e.ee;
      j["protocol"] = e.protocol;
      j["handle"] = e.handle;
      j["by"] = e.by;
      break;
    case Kind::kBlocked:
      j["node"] = e.node;
      j["ee"] = e.ee;
      j["reason"] = e.event;
      break;
    case Kind::kDelegated:
      j["node"] = e.node;
      j["from"] = e.from;
      j["to"] = e.to;
      j["handle"] = e.handle;
      break;
    case Kind::kResultReturned:
      j["node"] = e.node;
      j["ee"] = e.ee;
      j["handle"] = e.handle;
      j["ok"] = e.flag;
      j["payload"] = e.payload;
      break;
    case Kind::kRespSent:
      j["status"] = e.text;
      j["payload"] = e.payload;
      break;
    case Kind::kPending:
      j["node"] = e.node;
      j["handle"] = e.handle;
      break;
    case Kind::kAggregated:
    case Kind::kBudgetExhausted:
      break;
  }
  return j.dump();
}

std::string encode(const Trace& t) {
  std::string out;
  for (const auto& e : t) {
    out += encode_line(e);
    out += '\n';
  }
  return out;
}

Expected<Event, DecodeError> decode_line(const std::string& line, std::size_t lineno) {
  try {
    json j = json::parse(line);
    Event e;
    e.seq = j.at("seq").get<std::uint64_t>();
    e.tick = j.at("tick").get<std::uint64_t>();
    auto kind = parse_kind(j.at("kind").get<std::string>());
    if (!kind) return unexpected(DecodeError{lineno, "unknown kind"});
    e.kind = *kind;
    auto str = [&](const char* key) { return j.at(key).get<std::string>(); };
    switch (e.kind) {
      case Kind::kRegistered:
        e.ee = str("ee");
        e.text = str("ee_kind");
        e.flag = j.at("vm_ok").get<bool>();
        break;
      case Kind::kReqReceived: e.text = str("request"); break;
      case Kind::kIntentResolved: e.text = str("intent"); break;
      case Kind::kClarifyIntent: e.text = str("question"); break;
      case Kind::kDiscover:
        e.skills = j.at("skills").get<std::vector<std::string>>();
        e.found = j.at("found").get<std::vector<std::string>>();
        break;
      case Kind::kDagBuilt:
        for (const auto& o : j.at("nodes")) {
          NodeSpec n;
          n.id = o.at("id").get<std::string>();
          n.deps = o.at("deps").get<std::vector<std::string>>();
          n.ee = o.at("ee").get<std::string>();
          n.external = o.at("external").get<bool>();
          n.retry_limit = o.at("retry_limit").get<std::uint32_t>();
          n.fallbacks = o.at("fallbacks").get<std::vector<std::string>>();
          e.nodes.push_back(std::move(n));
        }
        break;
      case Kind::kTransition:
        e.node = str("node");
        e.from = str("from");
        e.to = str("to");
        e.event = str("event");
        break;
      case Kind::kInvoke:
        e.node = str("node");
        e.ee = str("ee");
        e.protocol = str("protocol");
        e.handle = j.at("handle").get<std::uint64_t>();
        e.by = str("by");
        break;
      case Kind::kBlocked:
        e.node = str("node");
        e.ee = str("ee");
        e.event = str("reason");
        break;
      case Kind::kDelegated:
        e.node = str("node");
        e.from = str("from");
        e.to = str("to");
        e.handle = j.at("handle").get<std::uint64_t>();
        break;
      case Kind::kResultReturned:
        e.node = str("node");
        e.ee = str("ee");
        e.handle = j.at("handle").get<std::uint64_t>();
        e.flag = j.at("ok").get<bool>();
        e.payload = str("payload");
        break;
      case Kind::kRespSent:
        e.text = str("status");
        e.payload = str("payload");
        break;
      case Kind::kPending:
        e.node = str("node");
        e.handle = j.at("handle").get<std::uint64_t>();
        break;
      case Kind::kAggregated:
      case Kind::kBudgetExhausted:
        break;
    }
    return e;
  } catch (const json::exception& ex) {
    return unexpected(DecodeError{lineno, ex.what()});
  }
}

Expected<Trace, DecodeError> decode(const std::string& text) {
  Trace out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto e = decode_line(line, lineno);
    if (!e) return unexpected(e.error());
    if (!out.empty() && (e->seq <= out.back().seq || e->tick < out.back().tick)) {
      return unexpected(DecodeError{lineno, "seq/tick out of order"});
    }
    out.push_back(std::move(*e));
  }
  if (out.empty()) return unexpected(DecodeError{0, "empty trace"});
  return out;
}

namespace {

struct NodeState {
  SubTaskState state = SubTaskState::kCreated;
  std::optional<SubTaskState> prev;
  std::vector<std::string> deps;
  bool external = true;
  std::uint32_t retry_count = 0;
  std::uint32_t retry_limit = 0;
  std::size_t fallbacks = 0;
};

std::string atom(std::string_view pred, std::initializer_list<std::string_view> args = {}) {
  std::vector<std::string> a(args.begin(), args.end());
  return tlogic::Atom{std::string(pred), a}.str();
}

}  // namespace

Expected<Replay, ReplayError> replay(const Trace& t) {
  if (t.empty()) return unexpected(ReplayError{0, "empty trace"});
  const Kind last = t.back().kind;
  if (last != Kind::kRespSent && last != Kind::kBudgetExhausted) {
    return unexpected(ReplayError{t.back().seq, "trace does not end in RespSent or BudgetExhausted"});
  }

  Replay out;
  std::map<std::string, NodeState> nodes;
  std::map<std::string, bool> vm;
  std::set<std::string> all_nodes;
  std::map<std::uint64_t, std::set<std::string>> handle_ees;
  bool dag_seen = false;

  auto persistent = [&](Snapshot& s) {
    for (const auto& [e, ok] : vm) {
      if (ok) s.insert(atom("vm_ok", {e}));
    }
    for (const auto& [id, n] : nodes) {
      s.insert(atom("in_dag", {id}));
      s.insert(atom("state_is", {id, lifecycle::to_string(n.state)}));
      if (n.prev) s.insert(atom("previous_state_is", {id, lifecycle::to_string(*n.prev)}));
      bool deps_ok = std::all_of(n.deps.begin(), n.deps.end(), [&](const std::string& d) {
        auto it = nodes.find(d);
        return it != nodes.end() && it->second.state == SubTaskState::kCompleted;
      });
      if (deps_ok) s.insert(atom("dependencies_satisfied", {id}));
      if (n.fallbacks > 0) s.insert(atom("has_fallbacks", {id}));
      if (n.retry_count < n.retry_limit) s.insert(atom("retry_policy_permits", {id}));
      if (n.external) s.insert(atom("external_entity_needed", {id}));
    }
  };

  std::size_t i = 0;
  const std::uint64_t last_tick = t.back().tick;
  for (std::uint64_t tick = 0; tick <= last_tick; ++tick) {
    Snapshot snap;
    for (; i < t.size() && t[i].tick == tick; ++i) {
      const Event& e = t[i];
      switch (e.kind) {
        case Kind::kRegistered:
          vm[e.ee] = e.flag;
          out.entities.push_back({e.ee, e.text == "tool" ? tlogic::EntityKind::kTool
                                                         : tlogic::EntityKind::kAgent});
          break;
        case Kind::kReqReceived: snap.insert("req_received"); break;
        case Kind::kIntentResolved: snap.insert("intent_resolved"); break;
        case Kind::kClarifyIntent: snap.insert("clarify_intent"); break;
        case Kind::kDiscover: snap.insert("discovered"); break;
        case Kind::kDagBuilt:
          if (dag_seen) return unexpected(ReplayError{e.seq, "second DagBuilt"});
          dag_seen = true;
          snap.insert("dag_built");
          for (const auto& n : e.nodes) {
            NodeState ns;
            ns.deps = n.deps;
            ns.external = n.external;
            ns.retry_limit = n.retry_limit;
            ns.fallbacks = n.fallbacks.size();
            nodes[n.id] = ns;
            out.dag_nodes.push_back(n.id);
            all_nodes.insert(n.id);
          }
          break;
        case Kind::kTransition: {
          auto it = nodes.find(e.node);
          auto from = lifecycle::parse_state(e.from);
          auto to = lifecycle::parse_state(e.to);
          auto ev = lifecycle::parse_event(e.event);
          if (it == nodes.end() || !from || !to || !ev) {
            return unexpected(ReplayError{e.seq, "bad transition record"});
          }
          NodeState& n = it->second;
          if (n.state != *from) {
            return unexpected(ReplayError{e.seq, "transition source does not match " + e.node});
          }
          if (*ev == lifecycle::LifecycleEvent::kRetryGranted) ++n.retry_count;
          if (*from == SubTaskState::kFallbackSelected && n.fallbacks > 0 &&
              (*ev == lifecycle::LifecycleEvent::kDispatchRequested ||
               *ev == lifecycle::LifecycleEvent::kRecoveryExhausted)) {
            --n.fallbacks;
          }
          n.prev = *from;
          n.state = *to;
          break;
        }
        case Kind::kInvoke:
          snap.insert(atom("invoked", {e.node}));
          all_nodes.insert(e.node);
          if (!e.ee.empty()) {
            snap.insert(atom("invoked_ee", {e.ee}));
            handle_ees[e.handle].insert(e.ee);
            out.invoke_ticks[e.ee].push_back(tick);
          }
          break;
        case Kind::kDelegated:
          snap.insert(atom("invoked_ee", {e.to}));
          handle_ees[e.handle].insert(e.to);
          out.invoke_ticks[e.to].push_back(tick);
          break;
        case Kind::kResultReturned:
          snap.insert(atom("result_returned", {e.node}));
          for (const auto& ee : handle_ees[e.handle]) snap.insert(atom("responded", {ee}));
          break;
        case Kind::kAggregated: snap.insert("aggregated"); break;
        case Kind::kRespSent:
          snap.insert("resp_sent");
          if (e.text == "Success") snap.insert("resp_success");
          break;
        case Kind::kBlocked:
        case Kind::kPending:
        case Kind::kBudgetExhausted:
          break;
      }
    }
    persistent(snap);
    out.snapshots.push_back(std::move(snap));
  }
  out.nodes.assign(all_nodes.begin(), all_nodes.end());
  return out;
}

}  // namespace akv::trace
