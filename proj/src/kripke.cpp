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

#include "akv/kripke.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "akv/orchestration.hpp"

namespace akv::checker {

using lifecycle::LifecycleEvent;
using lifecycle::SubTaskState;
using S = SubTaskState;

std::size_t state_cap_from_env() {
  const char* v = std::getenv("AKV_STATE_CAP");
  if (!v || !*v) return kDefaultStateCap;
  char* end = nullptr;
  unsigned long long n = std::strtoull(v, &end, 10);
  if (*end != '\0' || n == 0) return kDefaultStateCap;
  return static_cast<std::size_t>(n);
}

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::kReceiving: return "Receiving";
    case Phase::kClarifying: return "Clarifying";
    case Phase::kPlanning: return "Planning";
    case Phase::kExecuting: return "Executing";
    case Phase::kAggregating: return "Aggregating";
    case Phase::kResponded: return "Responded";
  }
  return "?";
}

ModelConfig ModelConfig::single() {
  ModelConfig c;
  c.name = "single";
  c.nodes.push_back(ModelNode{"t1", {}});
  return c;
}

ModelConfig ModelConfig::chain2() {
  ModelConfig c;
  c.name = "chain2";
  c.nodes.push_back(ModelNode{"a", {}});
  c.nodes.push_back(ModelNode{"b", {"a"}});
  return c;
}

std::optional<ModelConfig> named_model(const std::string& name) {
  if (name == "single") return ModelConfig::single();
  if (name == "chain2") return ModelConfig::chain2();
  if (name == "big") {
    ModelConfig c;
    c.name = "big";
    c.nodes = {{"a", {}}, {"b", {"a"}}, {"c", {"a"}}};
    for (auto& n : c.nodes) n.fallbacks = 1;
    c.cancel = true;
    c.silent = true;
    return c;
  }
  return std::nullopt;
}

ModelConfig model_from_scenario(const scenarios::Scenario& s) {
  ModelConfig c;
  c.name = s.name;
  c.fsm = s.fsm;
  c.cancel = !s.cancel_schedule.empty();
  for (const auto& b : s.behaviors)
    for (const auto& r : b.rules)
      if (r.action.kind == simnet::ActionKind::kSilent) c.silent = true;

  const auto* plan = scenarios::active_plan(s);
  if (!plan) {
    c.plan = false;
    c.clarify = true;
    return c;
  }
  for (const auto& pn : plan->nodes) {
    ModelNode n;
    n.id = pn.id;
    n.external = pn.needs_external;
    n.retry_limit = pn.retry_limit;
    std::uint32_t matches = 0;
    for (const auto& p : s.profiles) {
      if (!p.skills.contains(pn.skill)) continue;
      if (s.enforcement.vm_gate && !orchestration::validate_ee(p, s.validation_policy)) continue;
      ++matches;
    }
    n.fallbacks = matches > 0 ? std::min(pn.max_fallbacks, matches - 1) : 0;
    for (const auto& [from, to] : plan->edges)
      if (to == pn.id) n.deps.push_back(from);
    std::sort(n.deps.begin(), n.deps.end());
    c.nodes.push_back(std::move(n));
  }
  return c;
}

KripkeStructure KripkeStructure::explicit_graph(
    std::size_t n, const std::vector<std::pair<StateId, StateId>>& edges,
    const std::vector<std::vector<std::string>>& labels, std::vector<StateId> initial,
    std::vector<std::vector<StateId>> fairness, std::vector<std::string> atoms) {
  KripkeStructure k;
  k.states_.assign(n, GlobalState{});
  k.initial_ = std::move(initial);
  std::vector<std::vector<StateId>> adj(n);
  for (auto [a, b] : edges) adj[a].push_back(b);
  for (std::size_t s = 0; s < n; ++s) {
    k.succ_off_.push_back(static_cast<std::uint32_t>(k.succ_.size()));
    std::sort(adj[s].begin(), adj[s].end());
    adj[s].erase(std::unique(adj[s].begin(), adj[s].end()), adj[s].end());
    for (auto t : adj[s]) {
      k.succ_.push_back(t);
      k.edge_labels_.push_back(EdgeLabel{});
    }
  }
  k.succ_off_.push_back(static_cast<std::uint32_t>(k.succ_.size()));

  std::vector<std::uint32_t> count(n + 1, 0);
  for (auto t : k.succ_) ++count[t + 1];
  for (std::size_t i = 0; i < n; ++i) count[i + 1] += count[i];
  k.pred_off_ = count;
  k.pred_.assign(k.succ_.size(), 0);
  std::vector<std::uint32_t> fill(count.begin(), count.end() - 1);
  for (StateId s = 0; s < n; ++s)
    for (auto t : k.successors(s)) k.pred_[fill[t]++] = s;

  std::set<std::string> vocab(atoms.begin(), atoms.end());
  for (std::size_t s = 0; s < labels.size() && s < n; ++s)
    for (const auto& a : labels[s]) {
      auto [it, fresh] = k.atoms_.try_emplace(a, StateSet(n));
      it->second.set(s);
      if (atoms.empty()) vocab.insert(a);
    }
  k.own_vocabulary_ = std::move(vocab);
  for (const auto& f : fairness) {
    StateSet fs(n);
    for (auto s : f) fs.set(s);
    k.fairness_.push_back(std::move(fs));
  }
  return k;
}

std::span<const StateId> KripkeStructure::successors(StateId s) const {
  return {succ_.data() + succ_off_[s], succ_off_[s + 1] - succ_off_[s]};
}

std::span<const StateId> KripkeStructure::predecessors(StateId s) const {
  return {pred_.data() + pred_off_[s], pred_off_[s + 1] - pred_off_[s]};
}

const EdgeLabel& KripkeStructure::edge_label(StateId from, StateId to) const {
  static const EdgeLabel kNone;
  for (auto i = succ_off_[from]; i < succ_off_[from + 1]; ++i)
    if (succ_[i] == to) return edge_labels_[i];
  return kNone;
}

bool KripkeStructure::has_edge(StateId from, StateId to) const {
  auto s = successors(from);
  return std::find(s.begin(), s.end(), to) != s.end();
}

const StateSet* KripkeStructure::atom(const std::string& ground) const {
  auto it = atoms_.find(ground);
  return it == atoms_.end() ? nullptr : &it->second;
}

std::vector<std::string> KripkeStructure::labels(StateId s) const {
  std::vector<std::string> out;
  for (const auto& [name, set] : atoms_)
    if (set.test(s)) out.push_back(name);
  std::sort(out.begin(), out.end());
  return out;
}

std::string KripkeStructure::describe(StateId s) const {
  const auto& g = states_[s];
  std::ostringstream os;
  if (own_vocabulary_) {
    os << "#" << s << " {";
    auto l = labels(s);
    for (std::size_t i = 0; i < l.size(); ++i) os << (i ? "," : "") << l[i];
    os << "}";
    return os.str();
  }
  os << "#" << s << " " << to_string(g.phase);
  if (!g.resolved) os << "(unresolved)";
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const auto& n = g.nodes[i];
    os << " " << node_ids_[i] << "=" << lifecycle::to_string(n.state);
    os << "[prev=" << (n.prev ? lifecycle::to_string(*n.prev) : "-")
       << " rc=" << int(n.retry_count) << " fb=" << int(n.fallbacks) << "]";
  }
  return os.str();
}

class Builder {
 public:
  Builder(const ModelConfig& cfg, std::size_t cap) : cfg_(cfg), cap_(cap) {
    deps_.resize(cfg_.nodes.size());
    for (std::size_t i = 0; i < cfg_.nodes.size(); ++i)
      for (const auto& d : cfg_.nodes[i].deps)
        for (std::size_t j = 0; j < cfg_.nodes.size(); ++j)
          if (cfg_.nodes[j].id == d) deps_[i].push_back(j);
    intern_atoms();
  }

  Expected<KripkeStructure, StateCapExceeded> run() {
    k_.node_ids_.clear();
    for (const auto& n : cfg_.nodes) k_.node_ids_.push_back(n.id);

    GlobalState init;
    init.nodes.assign(cfg_.nodes.size(), NodeVec{});
    if (cfg_.plan) {
      init.resolved = true;
      k_.initial_.push_back(add(init));
    }
    if (cfg_.clarify) {
      init.resolved = false;
      k_.initial_.push_back(add(init));
    }

    std::vector<std::pair<StateId, EdgeLabel>> out;
    for (StateId s = 0; s < k_.states_.size(); ++s) {
      if (k_.states_.size() > cap_) return unexpected(StateCapExceeded{cap_, k_.states_.size()});
      out.clear();
      expand(k_.states_[s], out);
      if (out.empty()) out.push_back({s, EdgeLabel{}});
      k_.succ_off_.push_back(static_cast<std::uint32_t>(k_.succ_.size()));
      std::set<StateId> seen;
      for (auto& [t, label] : out) {
        if (!seen.insert(t).second) continue;
        k_.succ_.push_back(t);
        k_.edge_labels_.push_back(label);
      }
    }
    if (k_.states_.size() > cap_) return unexpected(StateCapExceeded{cap_, k_.states_.size()});
    k_.succ_off_.push_back(static_cast<std::uint32_t>(k_.succ_.size()));
    finish();
    return std::move(k_);
  }

 private:
  std::uint32_t intern(const std::string& name) {
    auto [it, fresh] = atom_index_.emplace(name, static_cast<std::uint32_t>(atom_names_.size()));
    if (fresh) atom_names_.push_back(name);
    return it->second;
  }

  void intern_atoms() {
    a_req_ = intern("req_received");
    a_intent_ = intern("intent_resolved");
    a_disc_ = intern("discovered");
    a_clar_ = intern("clarify_intent");
    a_dag_ = intern("dag_built");
    a_agg_ = intern("aggregated");
    a_resp_ = intern("resp_sent");
    a_success_ = intern("resp_success");
    for (const auto& n : cfg_.nodes) {
      NodeAtoms na;
      for (auto st : lifecycle::all_states()) {
        std::string sn(lifecycle::to_string(st));
        na.state[std::size_t(st)] = intern("state_is(" + n.id + "," + sn + ")");
        na.prev[std::size_t(st)] = intern("previous_state_is(" + n.id + "," + sn + ")");
      }
      na.deps = intern("dependencies_satisfied(" + n.id + ")");
      na.fallbacks = intern("has_fallbacks(" + n.id + ")");
      na.retry = intern("retry_policy_permits(" + n.id + ")");
      na.external = intern("external_entity_needed(" + n.id + ")");
      na.invoked = intern("invoked(" + n.id + ")");
      na.result = intern("result_returned(" + n.id + ")");
      na.in_dag = intern("in_dag(" + n.id + ")");
      node_atoms_.push_back(na);
    }
  }

  static std::string key(const GlobalState& g) {
    std::string k;
    k.reserve(2 + 4 * g.nodes.size());
    k.push_back(char(g.phase));
    k.push_back(char(g.resolved));
    for (const auto& n : g.nodes) {
      k.push_back(char(n.state));
      k.push_back(n.prev ? char(*n.prev) : char(0x7f));
      k.push_back(char(n.retry_count));
      k.push_back(char(n.fallbacks));
    }
    return k;
  }

  StateId add(const GlobalState& g) {
    auto [it, fresh] = index_.emplace(key(g), static_cast<StateId>(k_.states_.size()));
    if (fresh) {
      k_.states_.push_back(g);
      label(g);
    }
    return it->second;
  }

  bool deps_done(const GlobalState& g, std::size_t i) const {
    for (auto d : deps_[i])
      if (g.nodes[d].state != S::kCompleted) return false;
    return true;
  }

  bool dep_failed(const GlobalState& g, std::size_t i) const {
    for (auto d : deps_[i])
      if (g.nodes[d].state == S::kError || g.nodes[d].state == S::kCanceled) return true;
    return false;
  }

  lifecycle::SubTaskRecord record(const GlobalState& g, std::size_t i) const {
    const auto& n = g.nodes[i];
    const auto& mn = cfg_.nodes[i];
    lifecycle::SubTaskRecord r;
    r.id = mn.id;
    r.state = n.state;
    r.previous_state = n.prev;
    r.retry_count = n.retry_count;
    r.retry_limit = mn.retry_limit;
    r.fallback_queue.assign(n.fallbacks, "fallback");
    r.needs_external = mn.external;
    if (mn.external) r.assigned_ee = "primary";
    return r;
  }

  void label(const GlobalState& g) {
    std::vector<std::uint32_t> l;
    switch (g.phase) {
      case Phase::kReceiving:
        l.push_back(a_req_);
        if (g.resolved) {
          l.push_back(a_intent_);
          l.push_back(a_disc_);
        }
        break;
      case Phase::kClarifying: l.push_back(a_clar_); break;
      case Phase::kPlanning: l.push_back(a_dag_); break;
      case Phase::kExecuting: break;
      case Phase::kAggregating: l.push_back(a_agg_); break;
      case Phase::kResponded: {
        l.push_back(a_resp_);
        bool ok = g.resolved;
        for (const auto& n : g.nodes) ok = ok && n.state == S::kCompleted;
        if (ok) l.push_back(a_success_);
        break;
      }
    }
    bool planned = g.resolved && g.phase != Phase::kReceiving && g.phase != Phase::kClarifying;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const auto& n = g.nodes[i];
      const auto& na = node_atoms_[i];
      const auto& mn = cfg_.nodes[i];
      l.push_back(na.state[std::size_t(n.state)]);
      if (n.prev) l.push_back(na.prev[std::size_t(*n.prev)]);
      if (deps_done(g, i)) l.push_back(na.deps);
      if (n.fallbacks > 0) l.push_back(na.fallbacks);
      if (n.retry_count < mn.retry_limit) l.push_back(na.retry);
      if (mn.external) l.push_back(na.external);
      bool invoked = n.state == S::kDispatching ||
                     (n.state == S::kInProgress && !mn.external && n.prev != S::kDispatching);
      if (invoked) l.push_back(na.invoked);
      if (g.phase == Phase::kExecuting && (n.state == S::kCompleted || n.state == S::kFailed))
        l.push_back(na.result);
      if (planned) l.push_back(na.in_dag);
    }
    label_off_.push_back(static_cast<std::uint32_t>(labels_.size()));
    labels_.insert(labels_.end(), l.begin(), l.end());
  }

  void expand(const GlobalState g, std::vector<std::pair<StateId, EdgeLabel>>& out) {
    auto phase_step = [&](Phase p) {
      GlobalState n = g;
      n.phase = p;
      out.push_back({add(n), EdgeLabel{}});
    };
    switch (g.phase) {
      case Phase::kReceiving:
        phase_step(g.resolved ? Phase::kPlanning : Phase::kClarifying);
        return;
      case Phase::kClarifying: phase_step(Phase::kResponded); return;
      case Phase::kPlanning: phase_step(Phase::kExecuting); return;
      case Phase::kAggregating: phase_step(Phase::kResponded); return;
      case Phase::kResponded: phase_step(Phase::kResponded); return;
      case Phase::kExecuting: break;
    }

    bool all_terminal = std::all_of(g.nodes.begin(), g.nodes.end(),
                                    [](const NodeVec& n) { return lifecycle::is_terminal(n.state); });
    if (all_terminal) {
      phase_step(Phase::kAggregating);
      return;
    }

    std::vector<std::size_t> movers;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      auto st = g.nodes[i].state;
      if (st == S::kFailed || st == S::kRetryScheduled) {
        movers.push_back(i);
        break;
      }
    }
    if (movers.empty())
      for (std::size_t i = 0; i < g.nodes.size(); ++i) movers.push_back(i);

    for (auto i : movers) {
      auto r = record(g, i);
      auto guards = lifecycle::guards_for(r, deps_done(g, i), dep_failed(g, i), cfg_.cancel);
      for (auto e : lifecycle::enabled_events(r, guards, cfg_.fsm)) {
        auto next = lifecycle::transition(r, e, guards, cfg_.fsm);
        if (!next) continue;
        GlobalState n = g;
        auto& nv = n.nodes[i];
        nv.state = next->state;
        nv.prev = next->previous_state;
        nv.retry_count = static_cast<std::uint8_t>(next->retry_count);
        nv.fallbacks = static_cast<std::uint8_t>(next->fallback_queue.size());
        out.push_back({add(n), EdgeLabel{int(i), e}});
      }
      if (cfg_.silent && cfg_.nodes[i].external && g.nodes[i].state == S::kDispatching)
        out.push_back({add(g), EdgeLabel{int(i), std::nullopt}});
    }
  }

  void finish() {
    const std::size_t n = k_.states_.size();
    label_off_.push_back(static_cast<std::uint32_t>(labels_.size()));

    std::vector<StateSet> sets(atom_names_.size(), StateSet(n));
    for (std::size_t s = 0; s < n; ++s)
      for (auto i = label_off_[s]; i < label_off_[s + 1]; ++i) sets[labels_[i]].set(s);
    for (std::size_t a = 0; a < atom_names_.size(); ++a)
      if (sets[a].any()) k_.atoms_.emplace(atom_names_[a], std::move(sets[a]));

    std::vector<std::uint32_t> count(n + 1, 0);
    for (auto t : k_.succ_) ++count[t + 1];
    for (std::size_t i = 0; i < n; ++i) count[i + 1] += count[i];
    k_.pred_off_ = count;
    k_.pred_.assign(k_.succ_.size(), 0);
    std::vector<std::uint32_t> fill(count.begin(), count.end() - 1);
    for (StateId s = 0; s < n; ++s)
      for (auto t : k_.successors(s)) k_.pred_[fill[t]++] = s;

    for (std::size_t i = 0; i < cfg_.nodes.size(); ++i) {
      if (!cfg_.nodes[i].external) continue;
      StateSet f(n);
      for (std::size_t s = 0; s < n; ++s)
        if (k_.states_[s].nodes[i].state != S::kDispatching) f.set(s);
      k_.fairness_.push_back(std::move(f));
    }
  }

  struct NodeAtoms {
    std::array<std::uint32_t, lifecycle::kStateCount> state{}, prev{};
    std::uint32_t deps = 0, fallbacks = 0, retry = 0, external = 0, invoked = 0, result = 0,
                  in_dag = 0;
  };

  const ModelConfig& cfg_;
  std::size_t cap_;
  KripkeStructure k_;
  std::vector<std::vector<std::size_t>> deps_;
  std::unordered_map<std::string, StateId> index_;
  std::map<std::string, std::uint32_t> atom_index_;
  std::vector<std::string> atom_names_;
  std::vector<NodeAtoms> node_atoms_;
  std::vector<std::uint32_t> labels_, label_off_;
  std::uint32_t a_req_ = 0, a_intent_ = 0, a_disc_ = 0, a_clar_ = 0, a_dag_ = 0, a_agg_ = 0,
                a_resp_ = 0, a_success_ = 0;
};

Expected<KripkeStructure, StateCapExceeded> build_kripke(const ModelConfig& cfg, std::size_t cap) {
  return Builder(cfg, cap).run();
}

}  // namespace akv::checker
