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

#include "akv/ctl.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "akv/catalog.hpp"

namespace akv::checker {

using tlogic::Formula;
using tlogic::Op;

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::kHolds: return "Holds";
    case Outcome::kFails: return "Fails";
    case Outcome::kViolated: return "Violated";
    case Outcome::kSatisfied: return "Satisfied";
    case Outcome::kInconclusive: return "Inconclusive";
  }
  return "?";
}

std::vector<StateId> Lasso::path() const {
  std::vector<StateId> p = prefix;
  p.insert(p.end(), cycle.begin(), cycle.end());
  return p;
}

bool replayable(const KripkeStructure& k, const Lasso& l) {
  auto p = l.path();
  if (p.empty() || l.cycle.empty()) return false;
  if (std::find(k.initial().begin(), k.initial().end(), p.front()) == k.initial().end())
    return false;
  for (std::size_t i = 0; i + 1 < p.size(); ++i)
    if (!k.has_edge(p[i], p[i + 1])) return false;
  return k.has_edge(p.back(), l.cycle.front());
}

namespace {

constexpr std::uint32_t kNoScc = std::numeric_limits<std::uint32_t>::max();

// Strongly connected components of the subgraph induced by `within`.
// scc[s] == kNoScc for states outside it.
struct Sccs {
  std::vector<std::uint32_t> id;
  std::vector<std::vector<StateId>> members;
};

Sccs tarjan(const KripkeStructure& k, const StateSet& within) {
  const std::size_t n = k.size();
  Sccs out;
  out.id.assign(n, kNoScc);
  std::vector<std::uint32_t> index(n, kNoScc), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<StateId> stack;
  std::uint32_t counter = 0;

  struct Frame {
    StateId s;
    std::size_t next;
  };
  std::vector<Frame> call;

  for (auto root = within.find_first(); root != StateSet::npos; root = within.find_next(root)) {
    if (index[root] != kNoScc) continue;
    call.push_back({StateId(root), 0});
    index[root] = low[root] = counter++;
    stack.push_back(StateId(root));
    on_stack[root] = true;
    while (!call.empty()) {
      auto& fr = call.back();
      auto succ = k.successors(fr.s);
      if (fr.next < succ.size()) {
        StateId t = succ[fr.next++];
        if (!within.test(t)) continue;
        if (index[t] == kNoScc) {
          index[t] = low[t] = counter++;
          stack.push_back(t);
          on_stack[t] = true;
          call.push_back({t, 0});
        } else if (on_stack[t]) {
          low[fr.s] = std::min(low[fr.s], index[t]);
        }
        continue;
      }
      StateId s = fr.s;
      call.pop_back();
      if (!call.empty()) low[call.back().s] = std::min(low[call.back().s], low[s]);
      if (low[s] == index[s]) {
        auto cid = static_cast<std::uint32_t>(out.members.size());
        out.members.emplace_back();
        StateId t;
        do {
          t = stack.back();
          stack.pop_back();
          on_stack[t] = false;
          out.id[t] = cid;
          out.members.back().push_back(t);
        } while (t != s);
      }
    }
  }
  return out;
}

class Evaluator {
 public:
  Evaluator(const KripkeStructure& k, bool fair)
      : k_(k), fair_(fair && !k.fairness().empty()), n_(k.size()) {
    if (fair_) fair_states_ = eg(StateSet(n_).set());
  }

  Expected<StateSet, CheckError> eval(const Formula& f) {
    switch (f.op()) {
      case Op::kTrue: return StateSet(n_).set();
      case Op::kFalse: return StateSet(n_);
      case Op::kAtom: return atom(f.atom());
      default: break;
    }
    if (tlogic::is_ltl_temporal(f.op()))
      return unexpected(CheckError{CheckError::Kind::kNotCtl, tlogic::render(f)});

    auto a = eval(f.lhs());
    if (!a) return a;
    if (f.op() == Op::kNot) return ~*a;
    if (f.arity() == 1) {
      switch (f.op()) {
        case Op::kEX: return ex(*a);
        case Op::kAX: return ~ex(~*a);
        case Op::kEF: return eu(StateSet(n_).set(), *a);
        case Op::kAG: return ~eu(StateSet(n_).set(), ~*a);
        case Op::kEG: return eg(*a);
        case Op::kAF: return ~eg(~*a);
        default: break;
      }
    }
    auto b = eval(f.rhs());
    if (!b) return b;
    switch (f.op()) {
      case Op::kAnd: return *a & *b;
      case Op::kOr: return *a | *b;
      case Op::kImplies: return ~*a | *b;
      case Op::kEU: return eu(*a, *b);
      case Op::kAU: {
        StateSet nb = ~*b;
        return ~(eu(nb, ~*a & nb) | eg(nb));
      }
      default: break;
    }
    return unexpected(CheckError{CheckError::Kind::kNotCtl, tlogic::render(f)});
  }

  StateSet pre(const StateSet& target) const {
    StateSet out(n_);
    for (auto t = target.find_first(); t != StateSet::npos; t = target.find_next(t))
      for (auto p : k_.predecessors(StateId(t))) out.set(p);
    return out;
  }

  StateSet fair_states() const { return fair_ ? fair_states_ : StateSet(n_).set(); }

  StateSet ex(const StateSet& f) const { return pre(f & fair_states()); }

  // Least fixpoint of b' | (a & pre(Z)) with b' = b restricted to fair states.
  StateSet eu(const StateSet& a, const StateSet& b) const {
    StateSet z = b & fair_states();
    std::deque<StateId> work;
    for (auto s = z.find_first(); s != StateSet::npos; s = z.find_next(s)) work.push_back(StateId(s));
    while (!work.empty()) {
      StateId t = work.front();
      work.pop_front();
      for (auto p : k_.predecessors(t)) {
        if (z.test(p) || !a.test(p)) continue;
        z.set(p);
        work.push_back(p);
      }
    }
    return z;
  }

  // States of non-trivial SCCs inside f that meet every fairness set.
  StateSet good_sccs(const StateSet& f, Sccs* keep = nullptr) const {
    Sccs sccs = tarjan(k_, f);
    StateSet good(n_);
    for (const auto& members : sccs.members) {
      bool nontrivial = members.size() > 1;
      if (!nontrivial) {
        auto s = members.front();
        nontrivial = k_.has_edge(s, s);
      }
      if (!nontrivial) continue;
      if (fair_) {
        bool meets_all = true;
        for (const auto& fs : k_.fairness()) {
          bool meets = false;
          for (auto s : members)
            if (fs.test(s)) {
              meets = true;
              break;
            }
          if (!meets) {
            meets_all = false;
            break;
          }
        }
        if (!meets_all) continue;
      }
      for (auto s : members) good.set(s);
    }
    if (keep) *keep = std::move(sccs);
    return good;
  }

  StateSet eg(const StateSet& f) const {
    StateSet good = good_sccs(f);
    StateSet z = good;
    std::deque<StateId> work;
    for (auto s = z.find_first(); s != StateSet::npos; s = z.find_next(s)) work.push_back(StateId(s));
    while (!work.empty()) {
      StateId t = work.front();
      work.pop_front();
      for (auto p : k_.predecessors(t)) {
        if (z.test(p) || !f.test(p)) continue;
        z.set(p);
        work.push_back(p);
      }
    }
    return z;
  }

  bool fair() const { return fair_; }
  std::size_t n() const { return n_; }

 private:
  Expected<StateSet, CheckError> atom(const tlogic::Atom& a) const {
    if (!a.ground())
      return unexpected(CheckError{CheckError::Kind::kUnknownAtom, a.str() + " is not ground"});
    if (const auto& own = k_.own_vocabulary()) {
      if (!own->contains(a.str())) return unexpected(CheckError{CheckError::Kind::kUnknownAtom, a.str()});
      const StateSet* s = k_.atom(a.str());
      return s ? *s : StateSet(n_);
    }
    const auto* info = tlogic::find_predicate(a.predicate);
    if (!info) return unexpected(CheckError{CheckError::Kind::kUnknownAtom, a.str()});
    if (auto bad = tlogic::validate(Formula::atom(a)))
      return unexpected(CheckError{CheckError::Kind::kUnknownAtom, *bad});
    for (std::size_t i = 0; i < info->params.size(); ++i) {
      if (info->params[i] != tlogic::ParamKind::kNode) continue;
      const auto& ids = k_.node_ids();
      if (std::find(ids.begin(), ids.end(), a.args[i]) == ids.end())
        return unexpected(CheckError{CheckError::Kind::kUnknownAtom,
                                     a.str() + ": no sub-task '" + a.args[i] + "' in the model"});
    }
    const StateSet* s = k_.atom(a.str());
    return s ? *s : StateSet(n_);
  }

  const KripkeStructure& k_;
  bool fair_;
  std::size_t n_;
  StateSet fair_states_;
};

// Builds a path from a state that satisfies an existential NNF formula,
// closing it into a lasso.
class Witness {
 public:
  Witness(const KripkeStructure& k, Evaluator& ev) : k_(k), ev_(ev) {}

  Lasso from(StateId s, const Formula& g) {
    path_ = {s};
    loop_.reset();
    focus_.reset();
    extend(g);
    if (!loop_) close(ev_.fair_states().test(path_.back()));
    Lasso l;
    l.prefix.assign(path_.begin(), path_.begin() + std::ptrdiff_t(*loop_));
    l.cycle.assign(path_.begin() + std::ptrdiff_t(*loop_), path_.end());
    l.focus = focus_;
    return l;
  }

 private:
  StateSet eval(const Formula& f) { return *ev_.eval(f); }

  void extend(const Formula& g) {
    if (loop_ || g.propositional()) return;
    StateId s = path_.back();
    switch (g.op()) {
      case Op::kOr: {
        if (eval(g.lhs()).test(s)) return extend(g.lhs());
        return extend(g.rhs());
      }
      case Op::kAnd: {
        if (!g.lhs().propositional()) return extend(g.lhs());
        return extend(g.rhs());
      }
      case Op::kEX: {
        StateSet target = eval(g.lhs()) & ev_.fair_states();
        for (auto t : k_.successors(s))
          if (target.test(t)) {
            append({t});
            return extend(g.lhs());
          }
        return;
      }
      case Op::kEF:
      case Op::kEU: {
        StateSet a = g.op() == Op::kEF ? StateSet(ev_.n()).set() : eval(g.lhs());
        const Formula& body = g.op() == Op::kEF ? g.lhs() : g.rhs();
        StateSet b = eval(body) & ev_.fair_states();
        append(search(s, a, b));
        if (!focus_) focus_ = path_.size() - 1;
        return extend(body);
      }
      case Op::kEG: return lasso_within(eval(g.lhs()));
      default: return;
    }
  }

  // Shortest path (excluding `from`) to a state in `to`, moving through `via`.
  std::vector<StateId> search(StateId from, const StateSet& via, const StateSet& to,
                              bool allow_empty = true) const {
    if (allow_empty && to.test(from)) return {};
    std::vector<StateId> parent(ev_.n(), kNoScc);
    std::deque<StateId> work{from};
    parent[from] = from;
    while (!work.empty()) {
      StateId s = work.front();
      work.pop_front();
      for (auto t : k_.successors(s)) {
        if (to.test(t)) {
          std::vector<StateId> p{t};
          for (StateId x = s; x != from; x = parent[x]) p.push_back(x);
          std::reverse(p.begin(), p.end());
          return p;
        }
        if (parent[t] != kNoScc) continue;
        parent[t] = s;
        if (via.test(t)) work.push_back(t);
      }
    }
    return {};
  }

  void append(const std::vector<StateId>& p) { path_.insert(path_.end(), p.begin(), p.end()); }

  // Walk inside f to a fair SCC and loop through it.
  void lasso_within(const StateSet& f) {
    Sccs sccs;
    StateSet good = ev_.good_sccs(f, &sccs);
    if (!good.any()) return;
    append(search(path_.back(), f, good));
    StateId c0 = path_.back();
    StateSet same(ev_.n());
    for (auto s : sccs.members[sccs.id[c0]]) same.set(s);
    std::size_t loop_at = path_.size() - 1;

    StateId cur = c0;
    if (ev_.fair())
      for (const auto& fs : k_.fairness()) {
        auto step = search(cur, same, fs & same);
        append(step);
        if (!step.empty()) cur = step.back();
      }
    if (!k_.has_edge(cur, c0)) {
      StateSet target(ev_.n());
      target.set(c0);
      auto back = search(cur, same, target, false);
      back.pop_back();
      append(back);
    }
    loop_ = loop_at;
  }

  void close(bool fair_tail) {
    if (fair_tail || !ev_.fair()) {
      lasso_within(StateSet(ev_.n()).set());
      if (loop_) return;
    }
    // Any infinite continuation: follow first successors until a repeat.
    std::vector<std::size_t> seen_at(ev_.n(), kNoScc);
    for (std::size_t i = 0; i < path_.size(); ++i) seen_at[path_[i]] = i;
    for (;;) {
      StateId t = k_.successors(path_.back()).front();
      if (seen_at[t] != kNoScc && seen_at[t] >= focus_.value_or(0)) {
        loop_ = seen_at[t];
        return;
      }
      path_.push_back(t);
      seen_at[t] = path_.size() - 1;
    }
  }

  const KripkeStructure& k_;
  Evaluator& ev_;
  std::vector<StateId> path_;
  std::optional<std::size_t> loop_;
  std::optional<std::size_t> focus_;
};

}  // namespace

Expected<StateSet, CheckError> sat(const KripkeStructure& k, const Formula& f, bool fair) {
  Evaluator ev(k, fair);
  return ev.eval(f);
}

Expected<Verdict, CheckError> check_ctl(const KripkeStructure& k, const Formula& f, bool fair) {
  Formula g = f;
  if (f.logic() == tlogic::Logic::kLtl) {
    auto lifted = tlogic::lift_to_ctl(f);
    if (!lifted) return unexpected(CheckError{CheckError::Kind::kNotCtl, lifted.error()});
    g = *lifted;
  }
  Evaluator ev(k, fair);
  auto s = ev.eval(g);
  if (!s) return unexpected(s.error());

  for (auto init : k.initial()) {
    if (s->test(init)) continue;
    Verdict v;
    v.outcome = Outcome::kFails;
    Witness w(k, ev);
    v.lasso = w.from(init, tlogic::nnf(tlogic::Not(g)));
    return v;
  }
  Verdict v;
  v.outcome = Outcome::kHolds;
  return v;
}

}  // namespace akv::checker
