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

#include "akv/ctl.hpp"
#include "akv/formula.hpp"
#include "akv/trace.hpp"

namespace akv::checker {

struct Monitor {
  tlogic::Formula formula;
  // What is still owed by the rest of the trace.
  tlogic::Formula residual;
  Outcome verdict = Outcome::kInconclusive;
  std::uint64_t steps = 0;
  // Step at which the verdict was decided.
  std::optional<std::uint64_t> decided_at;
};

Monitor new_monitor(const tlogic::Formula& f);

/// Progresses the residual over one snapshot. Once the verdict is Violated
/// or Satisfied further snapshots are ignored.
Monitor monitor_step(Monitor m, const trace::Snapshot& snapshot);

/// End of trace: pending G obligations are met, pending F, U and X
/// obligations are not.
Verdict monitor_finalize(const Monitor& m);

/// Feeds every snapshot, then finalizes.
Verdict monitor_trace(const tlogic::Formula& f, const std::vector<trace::Snapshot>& snapshots);

/// One progression step of an NNF formula over a snapshot, simplified.
tlogic::Formula progress(const tlogic::Formula& f, const trace::Snapshot& snapshot);

}  // namespace akv::checker
