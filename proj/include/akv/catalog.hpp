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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "akv/expected.hpp"
#include "akv/formula.hpp"

namespace akv::tlogic {

enum class Category : std::uint8_t {
  kLiveness,
  kSafety,
  kCompleteness,
  kFairness,
  kReachability,
  kFlow,
};
std::string_view to_string(Category c);

/// How a template's variables are bound by instantiate().
enum class Binding : std::uint8_t {
  kNone,
  kEachNode,    // $v over sub-task ids
  kEachEntity,  // $e over all external entities
  kEachAgent,   // $e over agent entities
  kEachTool,    // $e over tool entities
};

enum class ExpectedOutcome : std::uint8_t { kHolds, kFails };

struct PropertyEntry {
  std::string name;
  Category category;
  std::string summary;
  // The property as typeset in the source tables, transliterated to text.
  std::string typeset;
  Formula formula;
  Binding binding = Binding::kNone;
  std::string notes;
  // Set on flagged variants: the verbatim entry they reinterpret.
  std::optional<std::string> variant_of;
  // Set on verbatim entries that range selections replace by a variant.
  std::optional<std::string> substitute;
  // Model-check expectations on the built-in configurations ("single",
  // "chain2", ...), fair=true.
  std::map<std::string, ExpectedOutcome> expected;

  bool is_variant() const { return variant_of.has_value(); }
};

/// 31 verbatim entries (HP1..HP17, TL1..TL14) followed by flagged variants.
const std::vector<PropertyEntry>& catalog();

struct NotFound {
  std::string name;
};

Expected<const PropertyEntry*, NotFound> find_property(std::string_view name);

/// Resolves a selection such as "all", "TL1..TL14" or "HP1,HP9,TL5'".
/// Ranges and "all" replace entries that carry a substitute by that variant;
/// explicit names are taken verbatim. "all" also appends the remaining
/// variants. Order follows the catalog, duplicates removed.
Expected<std::vector<const PropertyEntry*>, NotFound> select_properties(
    std::string_view selection);

enum class EntityKind : std::uint8_t { kAgent, kTool };

struct EntityRef {
  std::string id;
  EntityKind kind;
};

/// One ground formula per binding; unparameterised entries pass through.
std::vector<Formula> instantiate(const PropertyEntry& entry,
                                 const std::vector<std::string>& nodes,
                                 const std::vector<EntityRef>& entities);

struct NotLinearizable {
  // True for EF(p) formulas, which runtime checking treats as "witnessed
  // iff p holds at some step".
  bool witness_mode = false;
  std::string reason;
};

/// Linear-time reading of a CTL formula for runtime monitoring:
/// AG->G, AF->F, AX->X, EX->X, A[U]->U. EF/EG/E[U] are rejected. LTL input
/// is returned unchanged.
Expected<Formula, NotLinearizable> ltl_projection(const Formula& f);

/// For EF(p) with propositional p, returns p.
std::optional<Formula> witness_target(const Formula& f);

/// Exact CTL equivalent of an LTL formula read under "all paths", for the
/// forms where one exists: p, G p, F p, X p, p U q and G(p -> F q) with p, q
/// propositional. CTL input is returned unchanged.
Expected<Formula, std::string> lift_to_ctl(const Formula& f);

}  // namespace akv::tlogic
