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
#include <string>
#include <vector>

#include "akv/expected.hpp"
#include "akv/formula.hpp"
#include "akv/kripke.hpp"

namespace akv::checker {

enum class Outcome : std::uint8_t { kHolds, kFails, kViolated, kSatisfied, kInconclusive };
std::string_view to_string(Outcome o);

// An infinite path: prefix, then cycle repeated forever. The last state of
// the prefix (or of the cycle) has an edge to cycle.front().
struct Lasso {
  std::vector<StateId> prefix;
  std::vector<StateId> cycle;
  // Index into path() of the state that exhibits the violation, if known.
  std::optional<std::size_t> focus;

  std::vector<StateId> path() const;
};

struct Verdict {
  Outcome outcome = Outcome::kInconclusive;
  std::optional<Lasso> lasso;
  // Runtime verdicts: the step (tick) at which the outcome was decided.
  std::optional<std::uint64_t> step;
  std::string detail;
};

struct CheckError {
  enum class Kind : std::uint8_t { kUnknownAtom, kNotCtl } kind;
  std::string detail;
};

/// States satisfying f. Under fairness only fair paths count: path
/// quantifiers range over paths visiting every fairness set infinitely often.
Expected<StateSet, CheckError> sat(const KripkeStructure& k, const tlogic::Formula& f, bool fair);

/// Holds iff every initial state satisfies f; otherwise Fails with a lasso
/// from a failing initial state that witnesses the negation. LTL input is
/// lifted first when an exact CTL form exists.
Expected<Verdict, CheckError> check_ctl(const KripkeStructure& k, const tlogic::Formula& f,
                                        bool fair);

/// True iff the lasso starts in an initial state and follows edges of k.
bool replayable(const KripkeStructure& k, const Lasso& l);

}  // namespace akv::checker
