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

#include "akv/monitor.hpp"

#include <algorithm>
#include <vector>

namespace akv::checker {

using tlogic::Formula;
using tlogic::Op;

namespace {

bool is_const(const Formula& f, bool value) {
  return f.op() == (value ? Op::kTrue : Op::kFalse);
}

void flatten(const Formula& f, Op op, std::vector<Formula>& out) {
  if (f.op() == op) {
    flatten(f.lhs(), op, out);
    flatten(f.rhs(), op, out);
  } else {
    out.push_back(f);
  }
}

// And/Or with constants folded and duplicate operands removed, so repeated
// obligations do not pile up step after step.
Formula junction(Op op, const Formula& a, const Formula& b) {
  const bool absorbing = op == Op::kOr;
  std::vector<Formula> parts;
  flatten(a, op, parts);
  flatten(b, op, parts);
  std::vector<Formula> kept;
  for (auto& p : parts) {
    if (is_const(p, absorbing)) return Formula::truth(absorbing);
    if (is_const(p, !absorbing)) continue;
    kept.push_back(p);
  }
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  if (kept.empty()) return Formula::truth(!absorbing);
  Formula out = kept.back();
  for (auto i = kept.size() - 1; i-- > 0;) out = Formula::binary(op, kept[i], out);
  return out;
}

Formula negate(const Formula& f) {
  if (f.op() == Op::kTrue) return Formula::truth(false);
  if (f.op() == Op::kFalse) return Formula::truth(true);
  if (f.op() == Op::kNot) return f.lhs();
  return tlogic::Not(f);
}

bool finalize(const Formula& f) {
  switch (f.op()) {
    case Op::kTrue: return true;
    case Op::kG: return true;
    case Op::kAnd: return finalize(f.lhs()) && finalize(f.rhs());
    case Op::kOr: return finalize(f.lhs()) || finalize(f.rhs());
    default: return false;
  }
}

}  // namespace

Formula progress(const Formula& f, const trace::Snapshot& snap) {
  switch (f.op()) {
    case Op::kTrue:
    case Op::kFalse: return f;
    case Op::kAtom: return Formula::truth(snap.contains(f.atom().str()));
    case Op::kNot: return negate(progress(f.lhs(), snap));
    case Op::kAnd: return junction(Op::kAnd, progress(f.lhs(), snap), progress(f.rhs(), snap));
    case Op::kOr: return junction(Op::kOr, progress(f.lhs(), snap), progress(f.rhs(), snap));
    case Op::kImplies:
      return junction(Op::kOr, negate(progress(f.lhs(), snap)), progress(f.rhs(), snap));
    case Op::kX: return f.lhs();
    case Op::kG: return junction(Op::kAnd, progress(f.lhs(), snap), f);
    case Op::kF: return junction(Op::kOr, progress(f.lhs(), snap), f);
    case Op::kU:
      return junction(Op::kOr, progress(f.rhs(), snap),
                      junction(Op::kAnd, progress(f.lhs(), snap), f));
    default: return Formula::truth(false);
  }
}

Monitor new_monitor(const Formula& f) {
  return Monitor{f, tlogic::nnf(f), Outcome::kInconclusive, 0, std::nullopt};
}

Monitor monitor_step(Monitor m, const trace::Snapshot& snapshot) {
  if (m.verdict != Outcome::kInconclusive) return m;
  m.residual = progress(m.residual, snapshot);
  if (is_const(m.residual, true)) {
    m.verdict = Outcome::kSatisfied;
    m.decided_at = m.steps;
  } else if (is_const(m.residual, false)) {
    m.verdict = Outcome::kViolated;
    m.decided_at = m.steps;
  }
  ++m.steps;
  return m;
}

Verdict monitor_finalize(const Monitor& m) {
  Verdict v;
  if (m.verdict != Outcome::kInconclusive) {
    v.outcome = m.verdict;
    v.step = m.decided_at;
    return v;
  }
  v.outcome = finalize(m.residual) ? Outcome::kSatisfied : Outcome::kViolated;
  v.step = m.steps > 0 ? m.steps - 1 : 0;
  v.detail = "decided at end of trace, pending: " + tlogic::render(m.residual);
  return v;
}

Verdict monitor_trace(const Formula& f, const std::vector<trace::Snapshot>& snapshots) {
  Monitor m = new_monitor(f);
  for (const auto& s : snapshots) {
    m = monitor_step(std::move(m), s);
    if (m.verdict != Outcome::kInconclusive) break;
  }
  return monitor_finalize(m);
}

}  // namespace akv::checker
