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
#include <optional>
#include <set>
#include <string>

#include "akv/lifecycle.hpp"
#include "akv/orchestration.hpp"
#include "akv/scenario.hpp"
#include "akv/simnet.hpp"
#include "akv/trace.hpp"

namespace akv::orchestration {

struct InvocationPayload {
  SubTaskId subtask_id;
  std::string body;
};

struct InvokeError {
  enum class Kind : std::uint8_t {
    kUnvalidatedEntity,
    kSubtaskNotInDag,
    kDependenciesUnmet,
    kUnknownProtocol,
    kUnknownEntity,
  } kind;
  std::string detail;
};
std::string_view to_string(InvokeError::Kind k);

struct RunResult {
  Response response;
  trace::Trace trace;
  std::map<SubTaskId, lifecycle::SubTaskRecord> records;
  SessionState session;
  bool budget_exhausted = false;
};

// The host agent driving one user task against a scenario.
class Kernel {
 public:
  explicit Kernel(scenarios::Scenario scenario);

  // Ticks 0 and 1: registration, intent resolution, discovery, planning.
  // False when the task was answered without execution.
  bool start();
  // One execution tick. False once every sub-task is terminal.
  bool step();
  RunResult run();

  Expected<simnet::Handle, InvokeError> invoke(const EntityId& ee, const std::string& protocol,
                                               const InvocationPayload& payload,
                                               const std::string& by = "host");

  std::uint64_t tick() const { return tick_; }
  const TaskDag& dag() const { return dag_; }
  const std::map<SubTaskId, lifecycle::SubTaskRecord>& records() const { return records_; }
  const trace::Trace& trace() const { return trace_; }
  const Registry& registry() const { return registry_; }
  const UserTask& task() const { return task_; }

 private:
  trace::Event& emit(trace::Kind kind);
  void respond(Response r);
  bool all_terminal() const;
  void step_node(lifecycle::SubTaskRecord& r);
  bool apply(lifecycle::SubTaskRecord& r, lifecycle::LifecycleEvent e,
             const lifecycle::GuardSnapshot& g);
  void dispatch(lifecycle::SubTaskRecord& r, const lifecycle::GuardSnapshot& g);
  void absorb_sim_events();

  scenarios::Scenario scenario_;
  Registry registry_;
  simnet::SimEnv env_;
  UserTask task_;
  SessionState session_;
  TaskDag dag_;
  std::map<SubTaskId, lifecycle::SubTaskRecord> records_;
  std::map<SubTaskId, simnet::Handle> current_handle_;
  std::map<simnet::Handle, SubTaskId> handle_node_;
  std::set<simnet::Handle> injected_;
  std::map<SubTaskId, std::pair<bool, std::string>> inbox_;
  std::map<SubTaskId, std::string> payloads_;
  trace::Trace trace_;
  std::uint64_t tick_ = 0;
  std::uint64_t next_handle_ = 1;
  bool planned_ = false;
};

RunResult run_task(const scenarios::Scenario& scenario);

}  // namespace akv::orchestration
