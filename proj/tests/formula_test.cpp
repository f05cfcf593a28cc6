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

#include <gtest/gtest.h>

#include <functional>

#include "formula_gen.hpp"

namespace akv::tlogic {
namespace {

Formula P(std::string_view text) {
  auto f = parse(text);
  EXPECT_TRUE(f) << text << ": " << (f ? "" : f.error().message());
  return *f;
}

TEST(Parse, Hp1) {
  Formula f = P("AG(req_received -> AF resp_sent)");
  EXPECT_EQ(f, AG(Implies(Formula::atom("req_received"), AF(Formula::atom("resp_sent")))));
  EXPECT_EQ(f.logic(), Logic::kCtl);
  EXPECT_EQ(render(f), "AG((req_received -> AF(resp_sent)))");
}

TEST(Parse, SingleEf) {
  Formula f = P("EF(resp_sent)");
  EXPECT_EQ(f.op(), Op::kEF);
  EXPECT_EQ(f.lhs().op(), Op::kAtom);
}

TEST(Parse, UnbalancedParen) {
  auto f = parse("AG(");
  ASSERT_FALSE(f);
  EXPECT_EQ(f.error().line, 1);
  EXPECT_EQ(f.error().col, 4);
}

TEST(Parse, Precedence) {
  Formula p = Formula::atom("p"), q = Formula::atom("q"), r = Formula::atom("r");
  EXPECT_EQ(P("!p & q | r -> p"), Implies(Or(And(Not(p), q), r), p));
  EXPECT_EQ(P("p -> q -> r"), Implies(p, Implies(q, r)));
  EXPECT_EQ(P("p | q & r"), Or(p, And(q, r)));
  EXPECT_EQ(P("p U q U r"), U(p, U(q, r)));
  EXPECT_EQ(P("p & q U r"), And(p, U(q, r)));
  EXPECT_EQ(P("AG p & q"), And(AG(p), q));
  EXPECT_EQ(P("~p && q || r"), Or(And(Not(p), q), r));
  EXPECT_EQ(P("A[p U q | r]"), AU(p, Or(q, r)));
  EXPECT_EQ(P("E[!p U AX q]"), EU(Not(p), AX(q)));
}

TEST(Parse, AtomsWithArgs) {
  Formula f = P("state_is(t1, CREATED) # comment\n & vm_ok($e)");
  ASSERT_EQ(f.op(), Op::kAnd);
  EXPECT_EQ(f.lhs().atom().str(), "state_is(t1,CREATED)");
  EXPECT_FALSE(is_ground(f));
  EXPECT_TRUE(is_ground(substitute(f, {{"$e", "txEE"}})));
  EXPECT_EQ(render(substitute(f, {{"$e", "txEE"}})),
            "(state_is(t1,CREATED) & vm_ok(txEE))");
}

TEST(Parse, MalformedPositions) {
  for (const auto& m : testing::malformed_inputs()) {
    auto f = parse(m.text);
    ASSERT_FALSE(f) << m.text;
    EXPECT_EQ(f.error().line, m.line) << m.text;
    EXPECT_EQ(f.error().col, m.col) << m.text;
    EXPECT_FALSE(f.error().expected.empty());
  }
}

TEST(Render, RoundTripRandom) {
  testing::FormulaGen gen(7);
  for (int i = 0; i < 1000; ++i) {
    auto logic = i % 2 ? Logic::kLtl : Logic::kCtl;
    Formula f = gen.next(6, logic);
    ASSERT_LE(f.depth(), 6u);
    auto back = parse(render(f));
    ASSERT_TRUE(back) << render(f);
    EXPECT_EQ(*back, f) << render(f);
  }
}

TEST(Render, NestedUntil) {
  Formula f = P("A[p U E[q U A[r U p]]]");
  EXPECT_EQ(render(f), "A[p U E[q U A[r U p]]]");
  EXPECT_EQ(P(render(f)), f);
}

TEST(Formula, Logic) {
  EXPECT_EQ(P("G(p -> F q)").logic(), Logic::kLtl);
  EXPECT_TRUE(P("p & !q").propositional());
  EXPECT_FALSE(P("AX p").propositional());
  EXPECT_EQ(P("AX(AX(p))").depth(), 3u);
}

TEST(Validate, Vocabulary) {
  EXPECT_FALSE(validate(P("AG(invoked(a) -> in_dag(a))")));
  EXPECT_TRUE(validate(P("bogus")));
  EXPECT_TRUE(validate(P("invoked")));
  EXPECT_TRUE(validate(P("state_is(a, DONE)")));
  EXPECT_FALSE(validate(P("state_is(a, AWAITING_DEPENDENCY)")));
}

TEST(Nnf, Dualities) {
  EXPECT_EQ(nnf(P("!AG p")), P("EF !p"));
  EXPECT_EQ(nnf(P("!AF p")), P("EG !p"));
  EXPECT_EQ(nnf(P("!EX p")), P("AX !p"));
  EXPECT_EQ(nnf(P("!(p -> q)")), P("p & !q"));
  EXPECT_EQ(nnf(P("!A[p U q]")), P("E[!q U (!p & !q)] | EG !q"));
  EXPECT_EQ(nnf(P("!(p U q)")), P("(!q U (!p & !q)) | G !q"));
  EXPECT_EQ(nnf(P("!!p")), P("p"));
}

TEST(Nnf, NegationsOnlyOnAtoms) {
  testing::FormulaGen gen(11);
  std::function<bool(const Formula&)> ok = [&](const Formula& f) {
    if (f.op() == Op::kNot) return f.lhs().op() == Op::kAtom;
    if (f.op() == Op::kImplies) return false;
    for (std::size_t i = 0; i < f.arity(); ++i) {
      if (!ok(f.child(i))) return false;
    }
    return true;
  };
  for (int i = 0; i < 300; ++i) {
    Formula f = gen.next(5, i % 2 ? Logic::kLtl : Logic::kCtl);
    EXPECT_TRUE(ok(nnf(Not(f)))) << render(f);
  }
}

}  // namespace
}  // namespace akv::tlogic
