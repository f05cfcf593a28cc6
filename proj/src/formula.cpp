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

#include "akv/formula.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "akv/lifecycle.hpp"

namespace akv::tlogic {

bool is_ctl_temporal(Op op) { return op >= Op::kAX && op <= Op::kEU; }
bool is_ltl_temporal(Op op) { return op >= Op::kX; }
bool is_binary(Op op) {
  return op == Op::kAnd || op == Op::kOr || op == Op::kImplies ||
         op == Op::kAU || op == Op::kEU || op == Op::kU;
}

std::string_view op_keyword(Op op) {
  switch (op) {
    case Op::kTrue: return "true";
    case Op::kFalse: return "false";
    case Op::kAtom: return "atom";
    case Op::kNot: return "!";
    case Op::kAnd: return "&";
    case Op::kOr: return "|";
    case Op::kImplies: return "->";
    case Op::kAX: return "AX";
    case Op::kEX: return "EX";
    case Op::kAF: return "AF";
    case Op::kEF: return "EF";
    case Op::kAG: return "AG";
    case Op::kEG: return "EG";
    case Op::kAU: return "AU";
    case Op::kEU: return "EU";
    case Op::kX: return "X";
    case Op::kF: return "F";
    case Op::kG: return "G";
    case Op::kU: return "U";
  }
  return "?";
}

bool Atom::ground() const {
  return std::none_of(args.begin(), args.end(), [](const std::string& a) {
    return !a.empty() && a.front() == '$';
  });
}

std::string Atom::str() const {
  if (args.empty()) return predicate;
  std::string out = predicate + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ",";
    out += args[i];
  }
  return out + ")";
}

Formula Formula::make(Op op, Atom atom, std::vector<Formula> children) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->atom = std::move(atom);
  n->has_ctl = is_ctl_temporal(op);
  n->has_ltl = is_ltl_temporal(op);
  std::size_t d = 0;
  for (const auto& c : children) {
    n->has_ctl |= c.node_->has_ctl;
    n->has_ltl |= c.node_->has_ltl;
    d = std::max(d, c.node_->depth);
  }
  n->depth = d + 1;
  n->children = std::move(children);
  return Formula(std::move(n));
}

Formula Formula::truth(bool value) {
  return make(value ? Op::kTrue : Op::kFalse, {}, {});
}
Formula Formula::atom(Atom a) { return make(Op::kAtom, std::move(a), {}); }
Formula Formula::atom(std::string predicate, std::vector<std::string> args) {
  return atom(Atom{std::move(predicate), std::move(args)});
}
Formula Formula::unary(Op op, Formula arg) {
  return make(op, {}, {std::move(arg)});
}
Formula Formula::binary(Op op, Formula lhs, Formula rhs) {
  return make(op, {}, {std::move(lhs), std::move(rhs)});
}

std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.op() <=> b.op(); c != 0) return c;
  if (a.op() == Op::kAtom) return a.atom() <=> b.atom();
  if (auto c = a.arity() <=> b.arity(); c != 0) return c;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    if (auto c = a.child(i) <=> b.child(i); c != 0) return c;
  }
  return std::strong_ordering::equal;
}

bool operator==(const Formula& a, const Formula& b) {
  return (a <=> b) == std::strong_ordering::equal;
}

Formula Not(Formula f) { return Formula::unary(Op::kNot, std::move(f)); }
Formula And(Formula a, Formula b) {
  return Formula::binary(Op::kAnd, std::move(a), std::move(b));
}
Formula Or(Formula a, Formula b) {
  return Formula::binary(Op::kOr, std::move(a), std::move(b));
}
Formula Implies(Formula a, Formula b) {
  return Formula::binary(Op::kImplies, std::move(a), std::move(b));
}
Formula AX(Formula f) { return Formula::unary(Op::kAX, std::move(f)); }
Formula EX(Formula f) { return Formula::unary(Op::kEX, std::move(f)); }
Formula AF(Formula f) { return Formula::unary(Op::kAF, std::move(f)); }
Formula EF(Formula f) { return Formula::unary(Op::kEF, std::move(f)); }
Formula AG(Formula f) { return Formula::unary(Op::kAG, std::move(f)); }
Formula EG(Formula f) { return Formula::unary(Op::kEG, std::move(f)); }
Formula AU(Formula a, Formula b) {
  return Formula::binary(Op::kAU, std::move(a), std::move(b));
}
Formula EU(Formula a, Formula b) {
  return Formula::binary(Op::kEU, std::move(a), std::move(b));
}
Formula X(Formula f) { return Formula::unary(Op::kX, std::move(f)); }
Formula F(Formula f) { return Formula::unary(Op::kF, std::move(f)); }
Formula G(Formula f) { return Formula::unary(Op::kG, std::move(f)); }
Formula U(Formula a, Formula b) {
  return Formula::binary(Op::kU, std::move(a), std::move(b));
}

std::string SyntaxError::message() const {
  return "syntax error at " + std::to_string(line) + ":" + std::to_string(col) +
         ": expected " + expected;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok {
  kIdent,
  kVar,
  kNumber,
  kLParen,
  kRParen,
  kLBracket,
  kRBracket,
  kComma,
  kNot,
  kAnd,
  kOr,
  kArrow,
  kEnd,
  kBad,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : src_(s) {}

  Token next() {
    skip_space();
    Token t{Tok::kEnd, "", line_, col_};
    if (pos_ >= src_.size()) return t;
    char c = src_[pos_];
    auto single = [&](Tok k) {
      t.kind = k;
      t.text = std::string(1, c);
      advance();
      return t;
    };
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Tok::kIdent;
      t.text = take_word();
      return t;
    }
    if (c == '$') {
      advance();
      t.kind = Tok::kVar;
      t.text = "$" + take_word();
      if (t.text.size() == 1) t.kind = Tok::kBad;
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = Tok::kNumber;
      while (pos_ < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        t.text += src_[pos_];
        advance();
      }
      return t;
    }
    switch (c) {
      case '(': return single(Tok::kLParen);
      case ')': return single(Tok::kRParen);
      case '[': return single(Tok::kLBracket);
      case ']': return single(Tok::kRBracket);
      case ',': return single(Tok::kComma);
      case '!':
      case '~': return single(Tok::kNot);
      case '&':
        single(Tok::kAnd);
        if (peek_char() == '&') advance();
        t.text = "&";
        return t;
      case '|':
        single(Tok::kOr);
        if (peek_char() == '|') advance();
        t.text = "|";
        return t;
      case '-':
        advance();
        if (peek_char() == '>') {
          advance();
          t.kind = Tok::kArrow;
          t.text = "->";
          return t;
        }
        t.kind = Tok::kBad;
        t.text = "-";
        return t;
      default:
        return single(Tok::kBad);
    }
  }

 private:
  char peek_char() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }
  std::string take_word() {
    std::string w;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
            src_[pos_] == '_')) {
      w += src_[pos_];
      advance();
    }
    return w;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

struct ParseFailure {
  SyntaxError error;
};

std::optional<Op> prefix_op(const std::string& w) {
  static const std::map<std::string, Op, std::less<>> ops = {
      {"AX", Op::kAX}, {"EX", Op::kEX}, {"AF", Op::kAF}, {"EF", Op::kEF},
      {"AG", Op::kAG}, {"EG", Op::kEG}, {"X", Op::kX},   {"F", Op::kF},
      {"G", Op::kG},
  };
  auto it = ops.find(w);
  if (it == ops.end()) return std::nullopt;
  return it->second;
}

bool reserved(const std::string& w) {
  return prefix_op(w) || w == "A" || w == "E" || w == "U" || w == "true" ||
         w == "false";
}

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) { tok_ = lex_.next(); }

  Formula parse_all() {
    Formula f = implication(true);
    if (tok_.kind != Tok::kEnd) fail("end of input");
    return f;
  }

 private:
  [[noreturn]] void fail(std::string expected) {
    throw ParseFailure{SyntaxError{tok_.line, tok_.col, std::move(expected)}};
  }
  void shift() { tok_ = lex_.next(); }
  void expect(Tok k, const char* what) {
    if (tok_.kind != k) fail(what);
    shift();
  }
  bool at_word(const char* w) const {
    return tok_.kind == Tok::kIdent && tok_.text == w;
  }

  // `allow_until` is false directly inside A[..]/E[..] so that the bracket's
  // own 'U' is not taken as LTL until.
  Formula implication(bool allow_until) {
    Formula lhs = disjunction(allow_until);
    if (tok_.kind == Tok::kArrow) {
      shift();
      return Implies(std::move(lhs), implication(allow_until));
    }
    return lhs;
  }

  Formula disjunction(bool allow_until) {
    Formula f = conjunction(allow_until);
    while (tok_.kind == Tok::kOr) {
      shift();
      f = Or(std::move(f), conjunction(allow_until));
    }
    return f;
  }

  Formula conjunction(bool allow_until) {
    Formula f = until(allow_until);
    while (tok_.kind == Tok::kAnd) {
      shift();
      f = And(std::move(f), until(allow_until));
    }
    return f;
  }

  Formula until(bool allow_until) {
    Formula lhs = unary();
    if (allow_until && at_word("U")) {
      shift();
      return U(std::move(lhs), until(allow_until));
    }
    return lhs;
  }

  Formula unary() {
    if (tok_.kind == Tok::kNot) {
      shift();
      return Not(unary());
    }
    if (tok_.kind == Tok::kIdent) {
      if (auto op = prefix_op(tok_.text)) {
        shift();
        return Formula::unary(*op, unary());
      }
      if (tok_.text == "A" || tok_.text == "E") {
        Op op = tok_.text == "A" ? Op::kAU : Op::kEU;
        shift();
        expect(Tok::kLBracket, "'['");
        Formula lhs = implication(false);
        if (!at_word("U")) fail("'U'");
        shift();
        Formula rhs = implication(true);
        expect(Tok::kRBracket, "']'");
        return Formula::binary(op, std::move(lhs), std::move(rhs));
      }
    }
    return primary();
  }

  Formula primary() {
    if (tok_.kind == Tok::kLParen) {
      shift();
      Formula f = implication(true);
      expect(Tok::kRParen, "')'");
      return f;
    }
    if (tok_.kind != Tok::kIdent || tok_.text == "U") fail("formula");
    if (tok_.text == "true" || tok_.text == "false") {
      bool v = tok_.text == "true";
      shift();
      return Formula::truth(v);
    }
    Atom a{tok_.text, {}};
    shift();
    if (tok_.kind == Tok::kLParen) {
      shift();
      for (;;) {
        if (tok_.kind != Tok::kIdent && tok_.kind != Tok::kVar &&
            tok_.kind != Tok::kNumber) {
          fail("atom argument");
        }
        if (tok_.kind == Tok::kIdent && reserved(tok_.text)) {
          fail("atom argument");
        }
        a.args.push_back(tok_.text);
        shift();
        if (tok_.kind == Tok::kComma) {
          shift();
          continue;
        }
        expect(Tok::kRParen, "')' or ','");
        break;
      }
    }
    return Formula::atom(std::move(a));
  }

  Lexer lex_;
  Token tok_;
};

}  // namespace

Expected<Formula, SyntaxError> parse(std::string_view text) {
  try {
    Parser p(text);
    Formula f = p.parse_all();
    if (f.mixed()) {
      return unexpected(
          SyntaxError{1, 1, "formula without mixed CTL and LTL operators"});
    }
    return f;
  } catch (const ParseFailure& e) {
    return unexpected(e.error);
  }
}

std::string render(const Formula& f) {
  switch (f.op()) {
    case Op::kTrue: return "true";
    case Op::kFalse: return "false";
    case Op::kAtom: return f.atom().str();
    case Op::kNot: return "!(" + render(f.lhs()) + ")";
    case Op::kAnd:
    case Op::kOr:
    case Op::kImplies:
    case Op::kU:
      return "(" + render(f.lhs()) + " " + std::string(op_keyword(f.op())) +
             " " + render(f.rhs()) + ")";
    case Op::kAU:
      return "A[" + render(f.lhs()) + " U " + render(f.rhs()) + "]";
    case Op::kEU:
      return "E[" + render(f.lhs()) + " U " + render(f.rhs()) + "]";
    default:
      return std::string(op_keyword(f.op())) + "(" + render(f.lhs()) + ")";
  }
}

// ---------------------------------------------------------------------------
// Vocabulary

const std::vector<PredicateInfo>& vocabulary() {
  using P = ParamKind;
  static const std::vector<PredicateInfo> vocab = {
      {"state_is", {P::kNode, P::kState}},
      {"previous_state_is", {P::kNode, P::kState}},
      {"dependencies_satisfied", {P::kNode}},
      {"has_fallbacks", {P::kNode}},
      {"retry_policy_permits", {P::kNode}},
      {"external_entity_needed", {P::kNode}},
      {"req_received", {}},
      {"resp_sent", {}},
      {"resp_success", {}},
      {"intent_resolved", {}},
      {"clarify_intent", {}},
      {"dag_built", {}},
      {"discovered", {}},
      {"invoked", {P::kNode}},
      {"invoked_ee", {P::kEntity}},
      {"responded", {P::kEntity}},
      {"result_returned", {P::kNode}},
      {"aggregated", {}},
      {"vm_ok", {P::kEntity}},
      {"in_dag", {P::kNode}},
  };
  return vocab;
}

const PredicateInfo* find_predicate(std::string_view name) {
  for (const auto& p : vocabulary()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

namespace {
void collect_atoms(const Formula& f, std::vector<Atom>& out) {
  if (f.op() == Op::kAtom) {
    out.push_back(f.atom());
    return;
  }
  for (std::size_t i = 0; i < f.arity(); ++i) collect_atoms(f.child(i), out);
}
}  // namespace

std::vector<Atom> atoms_of(const Formula& f) {
  std::vector<Atom> out;
  collect_atoms(f, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool is_ground(const Formula& f) {
  auto atoms = atoms_of(f);
  return std::all_of(atoms.begin(), atoms.end(),
                     [](const Atom& a) { return a.ground(); });
}

std::optional<std::string> validate(const Formula& f) {
  if (f.mixed()) return "formula mixes CTL path quantifiers and LTL operators";
  for (const auto& a : atoms_of(f)) {
    const auto* p = find_predicate(a.predicate);
    if (!p) return "unknown predicate '" + a.predicate + "'";
    if (p->params.size() != a.args.size()) {
      return "predicate '" + a.predicate + "' expects " +
             std::to_string(p->params.size()) + " argument(s)";
    }
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      const auto& arg = a.args[i];
      if (p->params[i] == ParamKind::kState && arg.front() != '$' &&
          !lifecycle::parse_state(arg)) {
        return "unknown lifecycle state '" + arg + "' in " + a.str();
      }
    }
  }
  return std::nullopt;
}

Formula substitute(const Formula& f,
                   const std::map<std::string, std::string>& bindings) {
  switch (f.op()) {
    case Op::kTrue:
    case Op::kFalse:
      return f;
    case Op::kAtom: {
      Atom a = f.atom();
      bool changed = false;
      for (auto& arg : a.args) {
        if (auto it = bindings.find(arg); it != bindings.end()) {
          arg = it->second;
          changed = true;
        }
      }
      return changed ? Formula::atom(std::move(a)) : f;
    }
    default:
      if (f.arity() == 1) return Formula::unary(f.op(), substitute(f.lhs(), bindings));
      return Formula::binary(f.op(), substitute(f.lhs(), bindings),
                             substitute(f.rhs(), bindings));
  }
}

namespace {

Formula nnf_pos(const Formula& f);

Formula nnf_neg(const Formula& f) {
  switch (f.op()) {
    case Op::kTrue: return Formula::truth(false);
    case Op::kFalse: return Formula::truth(true);
    case Op::kAtom: return Not(f);
    case Op::kNot: return nnf_pos(f.lhs());
    case Op::kAnd: return Or(nnf_neg(f.lhs()), nnf_neg(f.rhs()));
    case Op::kOr: return And(nnf_neg(f.lhs()), nnf_neg(f.rhs()));
    case Op::kImplies: return And(nnf_pos(f.lhs()), nnf_neg(f.rhs()));
    case Op::kAX: return EX(nnf_neg(f.lhs()));
    case Op::kEX: return AX(nnf_neg(f.lhs()));
    case Op::kAF: return EG(nnf_neg(f.lhs()));
    case Op::kEF: return AG(nnf_neg(f.lhs()));
    case Op::kAG: return EF(nnf_neg(f.lhs()));
    case Op::kEG: return AF(nnf_neg(f.lhs()));
    case Op::kAU: {
      Formula nf = nnf_neg(f.lhs());
      Formula ng = nnf_neg(f.rhs());
      return Or(EU(ng, And(nf, ng)), EG(ng));
    }
    case Op::kEU: {
      Formula nf = nnf_neg(f.lhs());
      Formula ng = nnf_neg(f.rhs());
      return Or(AU(ng, And(nf, ng)), AG(ng));
    }
    case Op::kX: return X(nnf_neg(f.lhs()));
    case Op::kF: return G(nnf_neg(f.lhs()));
    case Op::kG: return F(nnf_neg(f.lhs()));
    case Op::kU: {
      Formula nf = nnf_neg(f.lhs());
      Formula ng = nnf_neg(f.rhs());
      return Or(U(ng, And(nf, ng)), G(ng));
    }
  }
  return f;
}

Formula nnf_pos(const Formula& f) {
  switch (f.op()) {
    case Op::kTrue:
    case Op::kFalse:
    case Op::kAtom:
      return f;
    case Op::kNot: return nnf_neg(f.lhs());
    case Op::kImplies: return Or(nnf_neg(f.lhs()), nnf_pos(f.rhs()));
    default:
      if (f.arity() == 1) return Formula::unary(f.op(), nnf_pos(f.lhs()));
      return Formula::binary(f.op(), nnf_pos(f.lhs()), nnf_pos(f.rhs()));
  }
}

}  // namespace

Formula nnf(const Formula& f) { return nnf_pos(f); }

}  // namespace akv::tlogic
