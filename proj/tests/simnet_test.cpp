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

#include "akv/simnet.hpp"

#include <gtest/gtest.h>

namespace akv::simnet {
namespace {

ReactionRule rule(std::string match, std::uint32_t delay, ActionKind kind,
                  std::string target = "") {
  ReactionRule r;
  r.match = std::move(match);
  r.delay = delay;
  r.action.kind = kind;
  r.action.target = std::move(target);
  if (kind == ActionKind::kFail) r.action.code = "E1";
  return r;
}

EEBehavior always(const std::string& ee, std::uint32_t delay, ActionKind kind,
                  std::string target = "") {
  return {ee, {rule("*", delay, kind, std::move(target))}};
}

TEST(SimNet, DelayArithmetic) {
  SimEnv env({always("ok2", 2, ActionKind::kSucceed)}, 0);
  for (int i = 0; i < 5; ++i) env.tick();
  ASSERT_EQ(env.clock(), 5u);
  auto due = env.submit(1, "a", "ok2", "x");
  ASSERT_TRUE(due);
  EXPECT_EQ(**due, 7u);
  EXPECT_TRUE(env.tick().empty());
  auto evs = env.tick();
  ASSERT_EQ(evs.size(), 1u);
  EXPECT_EQ(evs[0].tick, 7u);
  EXPECT_EQ(evs[0].kind, EventKind::kResult);
  EXPECT_TRUE(evs[0].ok);
  EXPECT_EQ(evs[0].payload, "x");
  EXPECT_TRUE(env.outstanding().empty());
}

TEST(SimNet, UnknownEntity) {
  SimEnv env({}, 0);
  auto r = env.submit(1, "a", "ghost", "");
  ASSERT_FALSE(r);
  EXPECT_EQ(r.error().ee_id, "ghost");
}

TEST(SimNet, SilentNeverAnswers) {
  SimEnv env({always("mute", 1, ActionKind::kSilent)}, 0);
  auto due = env.submit(9, "a", "mute", "");
  ASSERT_TRUE(due);
  EXPECT_FALSE(due->has_value());
  auto frag = env.run_until(50);
  ASSERT_TRUE(frag);
  EXPECT_TRUE(frag->events.empty());
  EXPECT_EQ(frag->pending, std::vector<Handle>{9});
}

TEST(SimNet, SameTickInSeqOrder) {
  SimEnv env({always("x", 1, ActionKind::kSucceed), always("y", 1, ActionKind::kFail)}, 0);
  ASSERT_TRUE(env.submit(2, "b", "y", ""));
  ASSERT_TRUE(env.submit(1, "a", "x", ""));
  auto evs = env.tick();
  ASSERT_EQ(evs.size(), 2u);
  EXPECT_EQ(evs[0].handle, 2u);
  EXPECT_FALSE(evs[0].ok);
  EXPECT_EQ(evs[0].payload, "E1");
  EXPECT_EQ(evs[1].handle, 1u);
}

TEST(SimNet, EmptyTick) {
  SimEnv env({}, 0);
  EXPECT_TRUE(env.tick().empty());
  EXPECT_EQ(env.clock(), 1u);
}

TEST(SimNet, PingPongUntilBudget) {
  SimEnv env({always("A", 1, ActionKind::kDelegateTo, "B"),
              always("B", 1, ActionKind::kDelegateTo, "A")},
             0);
  ASSERT_TRUE(env.submit(1, "t", "A", ""));
  auto frag = env.run_until(20);
  ASSERT_TRUE(frag);
  EXPECT_EQ(frag->events.size(), 20u);
  for (std::size_t i = 0; i < frag->events.size(); ++i) {
    const auto& e = frag->events[i];
    EXPECT_EQ(e.kind, EventKind::kDelegated);
    EXPECT_EQ(e.tick, i + 1);
    EXPECT_EQ(e.from, i % 2 ? "B" : "A");
  }
  EXPECT_EQ(frag->pending, std::vector<Handle>{1});
  EXPECT_EQ(frag->clock, 20u);
}

TEST(SimNet, ProxyChain) {
  SimEnv env({always("B", 1, ActionKind::kProxyInvoke, "T"),
              always("T", 2, ActionKind::kSucceed)},
             0);
  ASSERT_TRUE(env.submit(4, "a", "B", "q"));
  auto frag = env.run_until(10);
  ASSERT_TRUE(frag);
  ASSERT_EQ(frag->events.size(), 2u);
  EXPECT_EQ(frag->events[0].kind, EventKind::kProxyInvoked);
  EXPECT_EQ(frag->events[0].to, "T");
  EXPECT_EQ(frag->events[1].tick, 3u);
  EXPECT_EQ(frag->events[1].from, "T");
  EXPECT_TRUE(frag->pending.empty());
  EXPECT_EQ(frag->clock, 3u);
}

TEST(SimNet, DelegateToUnknownFails) {
  SimEnv env({always("A", 1, ActionKind::kDelegateTo, "ghost")}, 0);
  ASSERT_TRUE(env.submit(1, "t", "A", ""));
  auto evs = env.tick();
  ASSERT_EQ(evs.size(), 2u);
  EXPECT_EQ(evs[1].kind, EventKind::kResult);
  EXPECT_FALSE(evs[1].ok);
}

TEST(SimNet, BudgetZeroRejected) {
  SimEnv env({}, 0);
  EXPECT_FALSE(env.run_until(0));
}

TEST(SimNet, RuleLabels) {
  EXPECT_TRUE(rule_matches("*", "a", "host", 1));
  EXPECT_TRUE(rule_matches("node:a", "a", "host", 1));
  EXPECT_FALSE(rule_matches("node:a", "b", "host", 1));
  EXPECT_TRUE(rule_matches("nth:2", "a", "host", 2));
  EXPECT_FALSE(rule_matches("nth:2", "a", "host", 3));
  EXPECT_TRUE(rule_matches("upto:3", "a", "host", 3));
  EXPECT_FALSE(rule_matches("upto:3", "a", "host", 4));
  EXPECT_TRUE(rule_matches("from:B", "a", "B", 1));
  EXPECT_FALSE(rule_matches("nth:x", "a", "host", 1));
}

TEST(SimNet, FirstMatchingRuleFires) {
  EEBehavior flaky{"f", {rule("upto:2", 1, ActionKind::kFail),
                         rule("*", 1, ActionKind::kSucceed)}};
  SimEnv env({flaky}, 0);
  std::vector<bool> oks;
  for (Handle h = 1; h <= 4; ++h) {
    ASSERT_TRUE(env.submit(h, "a", "f", "p"));
    for (const auto& e : env.tick()) oks.push_back(e.ok);
  }
  EXPECT_EQ(oks, (std::vector<bool>{false, false, true, true}));
}

TEST(SimNet, StaleHandleDropped) {
  SimEnv env({always("x", 2, ActionKind::kSucceed)}, 0);
  ASSERT_TRUE(env.submit(1, "a", "x", ""));
  env.forget(1);
  auto frag = env.run_until(5);
  EXPECT_TRUE(frag->events.empty());
  EXPECT_TRUE(frag->pending.empty());
}

TEST(SimNet, JitterDeterministicPerSeed) {
  auto run = [](std::uint64_t seed) {
    EEBehavior b{"j", {rule("*", 1, ActionKind::kSucceed)}};
    b.rules[0].jitter = 5;
    SimEnv env({b}, seed);
    std::vector<std::uint64_t> dues;
    for (Handle h = 0; h < 20; ++h) dues.push_back(**env.submit(h, "a", "j", ""));
    return dues;
  };
  EXPECT_EQ(run(3), run(3));
  for (auto d : run(3)) {
    EXPECT_GE(d, 1u);
    EXPECT_LE(d, 6u);
  }
}

}  // namespace
}  // namespace akv::simnet
