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

#include "akv/catalog.hpp"

#include <gtest/gtest.h>

#include <algorithm>

namespace akv::tlogic {
namespace {

Formula P(std::string_view text) { return parse(text).value(); }

std::vector<std::string> names(const std::vector<const PropertyEntry*>& v) {
  std::vector<std::string> out;
  for (const auto* e : v) out.push_back(e->name);
  return out;
}

TEST(Catalog, Counts) {
  int verbatim = 0, variants = 0;
  for (const auto& e : catalog()) {
    (e.is_variant() ? variants : verbatim)++;
    EXPECT_FALSE(validate(e.formula)) << e.name;
    EXPECT_FALSE(e.summary.empty()) << e.name;
    EXPECT_FALSE(e.typeset.empty()) << e.name;
  }
  EXPECT_EQ(verbatim, 31);
  EXPECT_EQ(variants, 4);
  EXPECT_EQ(catalog().front().name, "HP1");
  EXPECT_EQ(catalog()[30].name, "TL14");
}

TEST(Catalog, Lookup) {
  auto tl7 = find_property("TL7");
  ASSERT_TRUE(tl7);
  EXPECT_EQ((*tl7)->category, Category::kSafety);
  EXPECT_EQ((*tl7)->formula, P("AG(state_is($v, ERROR) -> AG state_is($v, ERROR))"));

  auto hp12 = find_property("hp12");
  ASSERT_TRUE(hp12);
  EXPECT_EQ((*hp12)->category, Category::kCompleteness);
  EXPECT_EQ((*hp12)->formula.lhs().rhs().op(), Op::kEX);

  auto missing = find_property("HP99");
  ASSERT_FALSE(missing);
  EXPECT_EQ(missing.error().name, "HP99");

  EXPECT_EQ((*find_property("TL5"))->substitute, "TL5'");
  EXPECT_EQ((*find_property("TL5'"))->variant_of, "TL5");
}

TEST(Catalog, Categories) {
  auto cat = [](const char* n) { return (*find_property(n))->category; };
  EXPECT_EQ(cat("HP1"), Category::kLiveness);
  EXPECT_EQ(cat("HP9"), Category::kSafety);
  EXPECT_EQ(cat("HP14"), Category::kFairness);
  EXPECT_EQ(cat("HP17"), Category::kReachability);
  EXPECT_EQ(cat("TL4"), Category::kLiveness);
  EXPECT_EQ(cat("TL10"), Category::kSafety);
  EXPECT_EQ(cat("TL11"), Category::kFairness);
  EXPECT_EQ(cat("TL13"), Category::kFlow);
}

TEST(Select, Range) {
  auto r = select_properties("TL1..TL14");
  ASSERT_TRUE(r);
  auto n = names(*r);
  EXPECT_EQ(n.size(), 14u);
  EXPECT_EQ(std::count(n.begin(), n.end(), "TL5"), 0);
  EXPECT_EQ(std::count(n.begin(), n.end(), "TL5'"), 1);
  EXPECT_EQ(std::count(n.begin(), n.end(), "TL13'"), 1);
}

TEST(Select, ExplicitIsVerbatim) {
  auto r = select_properties("TL5, hp9");
  ASSERT_TRUE(r);
  EXPECT_EQ(names(*r), (std::vector<std::string>{"HP9", "TL5"}));
}

TEST(Select, All) {
  auto r = select_properties("all");
  ASSERT_TRUE(r);
  auto n = names(*r);
  EXPECT_EQ(n.size(), 33u);
  EXPECT_EQ(std::count(n.begin(), n.end(), "HP7"), 1);
  EXPECT_EQ(std::count(n.begin(), n.end(), "HP7'"), 1);
  EXPECT_EQ(std::count(n.begin(), n.end(), "TL13"), 0);
}

TEST(Select, Errors) {
  EXPECT_FALSE(select_properties("TL1..HP3"));
  EXPECT_FALSE(select_properties("TL20..TL30"));
  EXPECT_FALSE(select_properties("TL1,XX"));
}

TEST(Instantiate, Bindings) {
  std::vector<std::string> dag = {"a", "b", "c"};
  std::vector<EntityRef> ees = {{"agentA", EntityKind::kAgent},
                                {"toolT", EntityKind::kTool}};
  auto hp4 = instantiate(**find_property("HP4"), dag, ees);
  ASSERT_EQ(hp4.size(), 3u);
  EXPECT_EQ(hp4[1], P("AG(dag_built -> AF invoked(b))"));
  EXPECT_EQ(instantiate(**find_property("HP1"), dag, ees).size(), 1u);
  auto hp9 = instantiate(**find_property("HP9"), dag, ees);
  ASSERT_EQ(hp9.size(), 2u);
  EXPECT_EQ(hp9[0], P("AG(invoked_ee(agentA) -> vm_ok(agentA))"));
  EXPECT_EQ(instantiate(**find_property("HP13"), dag, ees).size(), 1u);
  EXPECT_EQ(instantiate(**find_property("HP14"), dag, ees)[0],
            P("G(invoked_ee(toolT) -> F responded(toolT))"));
  for (const auto& e : catalog()) {
    for (const auto& f : instantiate(e, dag, ees)) EXPECT_TRUE(is_ground(f)) << e.name;
  }
}

TEST(Projection, Mapping) {
  EXPECT_EQ(*ltl_projection(P("AG(p -> AF q)")), P("G(p -> F q)"));
  EXPECT_EQ(*ltl_projection(P("p")), P("p"));
  EXPECT_EQ(*ltl_projection(P("A[p U AX q]")), P("p U X q"));
  EXPECT_EQ(*ltl_projection(P("AG(p -> EX(q | r))")), P("G(p -> X(q | r))"));
  EXPECT_EQ(*ltl_projection(P("G p")), P("G p"));

  auto ef = ltl_projection(P("EF p"));
  ASSERT_FALSE(ef);
  EXPECT_TRUE(ef.error().witness_mode);
  EXPECT_EQ(witness_target(P("EF p")), P("p"));

  auto eg = ltl_projection(P("AG EG p"));
  ASSERT_FALSE(eg);
  EXPECT_FALSE(eg.error().witness_mode);
}

TEST(Lift, ExactForms) {
  EXPECT_EQ(*lift_to_ctl(P("G p")), P("AG p"));
  EXPECT_EQ(*lift_to_ctl(P("F(p & q)")), P("AF(p & q)"));
  EXPECT_EQ(*lift_to_ctl(P("X p")), P("AX p"));
  EXPECT_EQ(*lift_to_ctl(P("p U q")), P("A[p U q]"));
  EXPECT_EQ(*lift_to_ctl(P("G(p -> F q)")), P("AG(p -> AF q)"));
  EXPECT_EQ(*lift_to_ctl(P("AG p")), P("AG p"));
  EXPECT_FALSE(lift_to_ctl(P("G F p")));
  EXPECT_FALSE(lift_to_ctl(P("(p U q) | G p")));
}

}  // namespace
}  // namespace akv::tlogic
