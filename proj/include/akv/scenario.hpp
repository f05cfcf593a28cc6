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
#include <map>
#include <set>
#include <string>
#include <vector>

#include "akv/expected.hpp"
#include "akv/lifecycle.hpp"
#include "akv/orchestration.hpp"
#include "akv/simnet.hpp"

namespace akv::scenarios {

struct Enforcement {
  bool vm_gate = true;
  bool dag_membership_gate = true;
  bool dependency_gate = true;
  bool failure_propagation = true;
};

struct CancelEntry {
  std::uint64_t tick = 0;
  std::string node;
};

// An out-of-plan invocation request, e.g. one smuggled in through an
// entity's reply.
struct Injection {
  std::uint64_t tick = 0;
  std::string node;
  std::string ee;
  std::string protocol;
};

struct Scenario {
  std::string name;
  std::string request;
  std::vector<orchestration::IntentTemplate> intent_templates;
  std::map<std::string, orchestration::PlanTemplate> plans;
  std::vector<orchestration::CapabilityProfile> profiles;
  std::vector<simnet::EEBehavior> behaviors;
  orchestration::ValidationPolicy validation_policy;
  std::set<std::string> protocols = {"a2a", "mcp"};
  Enforcement enforcement;
  lifecycle::FsmOptions fsm;
  std::vector<CancelEntry> cancel_schedule;
  std::vector<Injection> injections;
  std::uint64_t tick_budget = 100;
  std::uint64_t seed = 0;
};

struct ScenarioError {
  enum class Kind : std::uint8_t {
    kSchemaError,
    kDanglingReference,
    kCycleDetected,
    kUnknownScenario,
    kIo,
  } kind;
  std::string detail;

  std::string message() const;
};

Expected<Scenario, ScenarioError> load_scenario(const std::string& document);
std::string dump_scenario(const Scenario& s);

const std::vector<std::string>& builtin_names();
Expected<Scenario, ScenarioError> builtin(const std::string& name);

// A builtin name or a path to a .scenario.json file.
Expected<Scenario, ScenarioError> resolve(const std::string& name_or_path);

enum class Mutation : std::uint8_t {
  kDisableVmGate,
  kDisableDagMembershipGate,
  kDisableDependencyGate,
  kSkipReadyGate,
  kForgetPreviousState,
};

const std::vector<Mutation>& all_mutations();
std::string_view to_string(Mutation m);

struct NotApplicable {
  Mutation mutation;
};

Expected<Scenario, NotApplicable> mutate(const Scenario& s, Mutation m);

// The plan the scenario's request resolves to, if any.
const orchestration::PlanTemplate* active_plan(const Scenario& s);

}  // namespace akv::scenarios
