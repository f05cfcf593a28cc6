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

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "akv/expected.hpp"

namespace akv::tlogic {

enum class Logic : std::uint8_t { kCtl, kLtl };

enum class Op : std::uint8_t {
  kTrue,
  kFalse,
  kAtom,
  kNot,
  kAnd,
  kOr,
  kImplies,
  // CTL
  kAX,
  kEX,
  kAF,
  kEF,
  kAG,
  kEG,
  kAU,
  kEU,
  // LTL
  kX,
  kF,
  kG,
  kU,
};

bool is_ctl_temporal(Op op);
bool is_ltl_temporal(Op op);
bool is_binary(Op op);
std::string_view op_keyword(Op op);

/// An atomic proposition, e.g. state_is(a, READY). Arguments starting with
/// '$' are template variables bound by instantiate().
struct Atom {
  std::string predicate;
  std::vector<std::string> args;

  bool ground() const;
  std::string str() const;

  auto operator<=>(const Atom&) const = default;
};

class Formula {
 public:
  static Formula truth(bool value);
  static Formula atom(Atom a);
  static Formula atom(std::string predicate, std::vector<std::string> args = {});
  static Formula unary(Op op, Formula arg);
  static Formula binary(Op op, Formula lhs, Formula rhs);

  Op op() const { return node_->op; }
  const Atom& atom() const { return node_->atom; }
  std::size_t arity() const { return node_->children.size(); }
  const Formula& child(std::size_t i) const { return node_->children[i]; }
  const Formula& lhs() const { return child(0); }
  const Formula& rhs() const { return child(1); }

  /// LTL when any bare X/F/G/U occurs, otherwise CTL (propositional
  /// formulas are tagged CTL).
  Logic logic() const { return node_->has_ltl ? Logic::kLtl : Logic::kCtl; }
  bool mixed() const { return node_->has_ctl && node_->has_ltl; }
  bool propositional() const { return !node_->has_ctl && !node_->has_ltl; }
  std::size_t depth() const { return node_->depth; }

  friend bool operator==(const Formula& a, const Formula& b);
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);

 private:
  struct Node {
    Op op;
    Atom atom;
    std::vector<Formula> children;
    bool has_ctl = false;
    bool has_ltl = false;
    std::size_t depth = 1;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make(Op op, Atom atom, std::vector<Formula> children);

  std::shared_ptr<const Node> node_;
};

// Builders.
Formula Not(Formula f);
Formula And(Formula a, Formula b);
Formula Or(Formula a, Formula b);
Formula Implies(Formula a, Formula b);
Formula AX(Formula f);
Formula EX(Formula f);
Formula AF(Formula f);
Formula EF(Formula f);
Formula AG(Formula f);
Formula EG(Formula f);
Formula AU(Formula a, Formula b);
Formula EU(Formula a, Formula b);
Formula X(Formula f);
Formula F(Formula f);
Formula G(Formula f);
Formula U(Formula a, Formula b);

struct SyntaxError {
  int line = 1;
  int col = 1;
  std::string expected;

  std::string message() const;
};

/// Grammar (loosest first): '->' (right assoc) < '|' < '&' < infix 'U' <
/// prefix '!' and temporal operators. A[f U g] / E[f U g] for CTL until.
/// Atoms: ident or ident(arg, ...); args are identifiers, $variables or
/// integers. Line comments start with '#'.
Expected<Formula, SyntaxError> parse(std::string_view text);

/// Fully parenthesised canonical form; parse(render(f)) == f.
std::string render(const Formula& f);

enum class ParamKind : std::uint8_t { kNode, kEntity, kState };

struct PredicateInfo {
  std::string_view name;
  std::vector<ParamKind> params;
};

/// The fixed atom vocabulary shared by the models, traces and catalog.
const std::vector<PredicateInfo>& vocabulary();
const PredicateInfo* find_predicate(std::string_view name);

/// Checks predicates, arities and state-name arguments. Returns a
/// description of the first problem, or nullopt.
std::optional<std::string> validate(const Formula& f);

std::vector<Atom> atoms_of(const Formula& f);
bool is_ground(const Formula& f);

Formula substitute(const Formula& f,
                   const std::map<std::string, std::string>& bindings);

/// Negation normal form (negations only on atoms) with implications
/// expanded. Until negations use the standard expansions, so the result may
/// be larger than the input.
Formula nnf(const Formula& f);

}  // namespace akv::tlogic
