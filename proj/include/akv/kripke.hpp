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
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "akv/expected.hpp"
#include "akv/lifecycle.hpp"
#include "akv/scenario.hpp"

namespace akv::checker {

using StateSet = boost::dynamic_bitset<>;
using StateId = std::uint32_t;

inline constexpr std::size_t kDefaultStateCap = 1'000'000;

// Reads AKV_STATE_CAP, falling back to kDefaultStateCap.
std::size_t state_cap_from_env();

enum class Phase : std::uint8_t {
  kReceiving,
  kClarifying,
  kPlanning,
  kExecuting,
  kAggregating,
  kResponded,
};
std::string_view to_string(Phase p);

struct ModelNode {
  std::string id;
  std::vector<std::string> deps;
  bool external = true;
  std::uint32_t retry_limit = 2;
  std::uint32_t fallbacks = 0;
};

struct ModelConfig {
  std::string name;
  std::vector<ModelNode> nodes;
  bool cancel = false;  // CancelRequested offered wherever the table allows it
  bool silent = false;  // entities may stay silent: DISPATCHING can stutter
  bool plan = true;     // the request resolves and gets planned
  bool clarify = false; // the request may end in a clarification
  lifecycle::FsmOptions fsm;

  static ModelConfig single();
  static ModelConfig chain2();
};

// "single", "chain2", "big" (3 nodes, every option on), or nullopt.
std::optional<ModelConfig> named_model(const std::string& name);

// Active plan of the scenario with its recovery settings, cancellation,
// silent entities and FSM switches.
ModelConfig model_from_scenario(const scenarios::Scenario& s);

struct NodeVec {
  lifecycle::SubTaskState state = lifecycle::SubTaskState::kCreated;
  std::optional<lifecycle::SubTaskState> prev;
  std::uint8_t retry_count = 0;
  std::uint8_t fallbacks = 0;

  friend bool operator==(const NodeVec&, const NodeVec&) = default;
};

struct GlobalState {
  Phase phase = Phase::kReceiving;
  bool resolved = true;
  std::vector<NodeVec> nodes;

  friend bool operator==(const GlobalState&, const GlobalState&) = default;
};

// Which move an edge stands for: a node's lifecycle event, or a phase step
// (node = -1).
struct EdgeLabel {
  int node = -1;
  std::optional<lifecycle::LifecycleEvent> event;
};

class KripkeStructure {
 public:
  /// A hand-made structure over free-form atoms. Its vocabulary is exactly
  /// `atoms` (or the atoms used in `labels` when empty). The transition
  /// relation must be total.
  static KripkeStructure explicit_graph(std::size_t n,
                                        const std::vector<std::pair<StateId, StateId>>& edges,
                                        const std::vector<std::vector<std::string>>& labels,
                                        std::vector<StateId> initial,
                                        std::vector<std::vector<StateId>> fairness = {},
                                        std::vector<std::string> atoms = {});

  std::size_t size() const { return states_.size(); }
  std::size_t edge_count() const { return succ_.size(); }
  const GlobalState& state(StateId s) const { return states_[s]; }
  const std::vector<StateId>& initial() const { return initial_; }
  std::span<const StateId> successors(StateId s) const;
  std::span<const StateId> predecessors(StateId s) const;
  const EdgeLabel& edge_label(StateId from, StateId to) const;
  bool has_edge(StateId from, StateId to) const;

  const std::vector<std::string>& node_ids() const { return node_ids_; }
  // States labelled with the ground atom, or nullptr when no state is.
  const StateSet* atom(const std::string& ground) const;
  std::vector<std::string> labels(StateId s) const;
  const std::vector<StateSet>& fairness() const { return fairness_; }
  // Set for explicit graphs, whose atoms are not drawn from the shared
  // vocabulary.
  const std::optional<std::set<std::string>>& own_vocabulary() const { return own_vocabulary_; }

  std::string describe(StateId s) const;

 private:
  friend class Builder;

  std::vector<GlobalState> states_;
  std::vector<StateId> initial_;
  std::vector<std::uint32_t> succ_off_, succ_;
  std::vector<EdgeLabel> edge_labels_;
  std::vector<std::uint32_t> pred_off_, pred_;
  std::vector<std::string> node_ids_;
  std::unordered_map<std::string, StateSet> atoms_;
  std::vector<StateSet> fairness_;
  std::optional<std::set<std::string>> own_vocabulary_;
};

struct StateCapExceeded {
  std::size_t cap = 0;
  std::size_t reached = 0;
};

/// Reachable product of the host phases and the per-node lifecycles.
/// Nodes interleave; while a node is FAILED or RETRY_SCHEDULED only the
/// first such node moves. Deadlocked states get a self-loop.
Expected<KripkeStructure, StateCapExceeded> build_kripke(const ModelConfig& cfg,
                                                        std::size_t cap = kDefaultStateCap);

}  // namespace akv::checker
