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

#include <string>
#include <vector>

#include "akv/catalog.hpp"
#include "akv/ctl.hpp"
#include "akv/kripke.hpp"
#include "akv/scenario.hpp"
#include "akv/trace.hpp"

namespace akv::checker {

struct GroundResult {
  tlogic::Formula formula;
  Verdict verdict;
};

struct PropertyResult {
  const tlogic::PropertyEntry* entry = nullptr;
  Outcome outcome = Outcome::kInconclusive;
  // False when the entry has no form this engine can check.
  bool checked = true;
  std::string note;
  std::vector<GroundResult> grounds;

  bool failed() const { return outcome == Outcome::kViolated || outcome == Outcome::kFails; }
};

using Selection = std::vector<const tlogic::PropertyEntry*>;

/// Monitors each property's linear-time reading over the replayed run.
/// EF(p) entries are witnessed iff p holds at some step.
std::vector<PropertyResult> check_runtime(const trace::Replay& r, const Selection& props);

std::vector<PropertyResult> check_model(const KripkeStructure& k, const Selection& props,
                                        bool fair);

struct NoEvidence {};

/// Counterexample report for a failed model check: the violated ground
/// formula, the state vectors along the lasso and the offending move.
Expected<std::string, NoEvidence> explain(const PropertyResult& p, const KripkeStructure& k);

/// Report for a runtime violation: ground formula, step, and the atoms of
/// the formula that held at that step.
Expected<std::string, NoEvidence> explain(const PropertyResult& p, const trace::Replay& r);

// run_task + replay + check_runtime.
Expected<std::vector<PropertyResult>, std::string> check_scenario_run(
    const scenarios::Scenario& s, const Selection& props);

struct KillRow {
  scenarios::Mutation mutation;
  std::string base;
  std::vector<std::string> killed_by;
};

std::string kill_base(scenarios::Mutation m);

/// For each mutation: properties that pass on the base scenario (runtime
/// and fair model check) and fail on the mutant.
Expected<std::vector<KillRow>, std::string> kill_matrix(std::size_t cap = kDefaultStateCap);
std::string render_kill_matrix(const std::vector<KillRow>& rows);

}  // namespace akv::checker
