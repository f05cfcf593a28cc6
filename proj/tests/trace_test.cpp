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

#include "akv/trace.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "akv/kernel.hpp"

namespace akv::trace {
namespace {

Event ev(std::uint64_t seq, std::uint64_t tick, Kind k) {
  Event e;
  e.seq = seq;
  e.tick = tick;
  e.kind = k;
  return e;
}

// One node "t" on entity "x": registered, planned, dispatched, answered.
Trace tiny() {
  Trace t;
  auto reg = ev(0, 0, Kind::kRegistered);
  reg.ee = "x";
  reg.text = "tool";
  reg.flag = true;
  t.push_back(reg);
  auto req = ev(1, 0, Kind::kReqReceived);
  req.text = "do it";
  t.push_back(req);
  auto dag = ev(2, 1, Kind::kDagBuilt);
  dag.nodes = {{"t", {}, "x", true, 1, {"y"}}};
  t.push_back(dag);
  auto tr = [&](std::uint64_t seq, std::uint64_t tick, const char* from, const char* to,
                const char* e) {
    auto x = ev(seq, tick, Kind::kTransition);
    x.node = "t";
    x.from = from;
    x.to = to;
    x.event = e;
    t.push_back(x);
  };
  tr(3, 2, "CREATED", "READY", "DepsSatisfied");
  tr(4, 2, "READY", "DISPATCHING", "DispatchRequested");
  auto inv = ev(5, 2, Kind::kInvoke);
  inv.node = "t";
  inv.ee = "x";
  inv.protocol = "mcp";
  inv.handle = 1;
  inv.by = "host";
  t.push_back(inv);
  tr(6, 3, "DISPATCHING", "IN_PROGRESS", "DeliveryAck");
  auto res = ev(7, 4, Kind::kResultReturned);
  res.node = "t";
  res.ee = "x";
  res.handle = 1;
  res.flag = true;
  res.payload = "42";
  t.push_back(res);
  tr(8, 4, "IN_PROGRESS", "COMPLETED", "ExecSucceeded");
  t.push_back(ev(9, 5, Kind::kAggregated));
  auto resp = ev(10, 6, Kind::kRespSent);
  resp.text = "Success";
  resp.payload = "42";
  t.push_back(resp);
  return t;
}

TEST(Codec, RoundTrip) {
  auto t = tiny();
  auto text = encode(t);
  auto back = decode(text);
  ASSERT_TRUE(back) << back.error().message;
  EXPECT_EQ(*back, t);
  EXPECT_EQ(encode(*back), text);
  EXPECT_EQ(encode_line(t[1]), R"({"seq":1,"tick":0,"kind":"ReqReceived","request":"do it"})");
}

TEST(Codec, EveryKindRoundTrips) {
  for (const auto& name : scenarios::builtin_names()) {
    auto run = orchestration::run_task(*scenarios::builtin(name));
    auto back = decode(encode(run.trace));
    ASSERT_TRUE(back) << name;
    EXPECT_EQ(*back, run.trace) << name;
  }
}

TEST(Codec, NominalGolden) {
  std::ifstream in(std::string(AKV_SOURCE_DIR) + "/tests/golden/nominal.trace.jsonl");
  ASSERT_TRUE(in);
  std::stringstream buf;
  buf << in.rdbuf();
  auto run = orchestration::run_task(*scenarios::builtin("nominal"));
  EXPECT_EQ(encode(run.trace), buf.str());
}

TEST(Codec, Errors) {
  auto lines = encode(tiny());
  auto bad = decode(lines.substr(0, lines.find('\n') + 1) + "{not json\n");
  ASSERT_FALSE(bad);
  EXPECT_EQ(bad.error().line, 2u);

  auto unknown = decode_line(R"({"seq":0,"tick":0,"kind":"Teleported"})");
  ASSERT_FALSE(unknown);
  EXPECT_EQ(unknown.error().message, "unknown kind");

  auto missing = decode_line(R"({"seq":0,"tick":0,"kind":"Invoke","node":"t"})", 7);
  ASSERT_FALSE(missing);
  EXPECT_EQ(missing.error().line, 7u);

  auto t = tiny();
  std::swap(t[3], t[4]);
  auto order = decode(encode(t));
  ASSERT_FALSE(order);
  EXPECT_EQ(order.error().message, "seq/tick out of order");

  EXPECT_FALSE(decode(""));
  EXPECT_FALSE(decode("\n\n"));
}

TEST(Replay, AtomsPerTick) {
  auto r = replay(tiny());
  ASSERT_TRUE(r) << r.error().message;
  ASSERT_EQ(r->snapshots.size(), 7u);
  const auto& s = r->snapshots;
  EXPECT_EQ(s[0], (Snapshot{"req_received", "vm_ok(x)"}));
  EXPECT_TRUE(s[1].contains("dag_built"));
  EXPECT_TRUE(s[1].contains("in_dag(t)"));
  EXPECT_TRUE(s[1].contains("state_is(t,CREATED)"));
  EXPECT_TRUE(s[1].contains("dependencies_satisfied(t)"));
  EXPECT_TRUE(s[1].contains("has_fallbacks(t)"));
  EXPECT_TRUE(s[1].contains("retry_policy_permits(t)"));
  EXPECT_TRUE(s[1].contains("external_entity_needed(t)"));
  EXPECT_FALSE(s[1].contains("previous_state_is(t,CREATED)"));
  EXPECT_TRUE(s[2].contains("state_is(t,DISPATCHING)"));
  EXPECT_TRUE(s[2].contains("previous_state_is(t,READY)"));
  EXPECT_TRUE(s[2].contains("invoked(t)"));
  EXPECT_TRUE(s[2].contains("invoked_ee(x)"));
  EXPECT_FALSE(s[3].contains("invoked(t)"));
  EXPECT_TRUE(s[4].contains("result_returned(t)"));
  EXPECT_TRUE(s[4].contains("responded(x)"));
  EXPECT_TRUE(s[4].contains("state_is(t,COMPLETED)"));
  EXPECT_TRUE(s[5].contains("aggregated"));
  EXPECT_TRUE(s[6].contains("resp_sent"));
  EXPECT_TRUE(s[6].contains("resp_success"));

  EXPECT_EQ(r->dag_nodes, std::vector<std::string>{"t"});
  EXPECT_EQ(r->nodes, std::vector<std::string>{"t"});
  ASSERT_EQ(r->entities.size(), 1u);
  EXPECT_EQ(r->entities[0].kind, tlogic::EntityKind::kTool);
  EXPECT_EQ(r->invoke_ticks.at("x"), std::vector<std::uint64_t>{2});
}

TEST(Replay, RejectsTruncatedTraces) {
  auto t = tiny();
  t.pop_back();
  auto r = replay(t);
  ASSERT_FALSE(r);
  EXPECT_EQ(r.error().seq, 9u);
  EXPECT_FALSE(replay({}));
}

TEST(Replay, RejectsInconsistentTraces) {
  auto t = tiny();
  t[4].from = "CREATED";
  auto r = replay(t);
  ASSERT_FALSE(r);
  EXPECT_EQ(r.error().seq, 4u);

  t = tiny();
  t[5].kind = Kind::kDagBuilt;
  t[5].nodes = t[2].nodes;
  EXPECT_FALSE(replay(t));

  t = tiny();
  t[3].event = "Teleport";
  EXPECT_FALSE(replay(t));
}

TEST(Replay, BudgetExhaustionEndsATrace) {
  auto run = orchestration::run_task(*scenarios::builtin("circular_delegation"));
  auto r = replay(run.trace);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->snapshots.size(), run.trace.back().tick + 1);
  for (const auto& s : r->snapshots) EXPECT_FALSE(s.contains("resp_sent"));
}

}  // namespace
}  // namespace akv::trace
