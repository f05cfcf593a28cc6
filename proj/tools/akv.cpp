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

// akv: run scenarios, model-check and monitor the property catalog.
//
//   akv run <scenario> [--trace out.trace.jsonl] [--seed n]
//   akv check <scenario|single|chain2|big> [--props sel] [--fair on|off] [--cap n]
//   akv monitor <trace> [--props sel]
//   akv list | explain <name> | dump <scenario> | kill-matrix
//
// Exit codes: 0 all pass, 1 a property or the response failed, 2 usage or
// configuration error.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "akv/kernel.hpp"
#include "akv/verify.hpp"

namespace {

using namespace akv;
using checker::Outcome;
using checker::PropertyResult;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

Expected<checker::Selection, int> selection(const std::string& props) {
  auto sel = tlogic::select_properties(props);
  if (!sel) {
    std::cerr << "unknown property: " << sel.error().name << "\n";
    return unexpected(kUsage);
  }
  return *sel;
}

void variant_notes(const checker::Selection& sel) {
  for (const auto* e : sel) {
    if (!e->variant_of) continue;
    bool original = std::any_of(sel.begin(), sel.end(),
                                [&](const auto* o) { return o->name == *e->variant_of; });
    if (!original) std::cout << "note: " << e->name << " stands in for " << *e->variant_of << "\n";
  }
}

// The explanation starts with its own status line.
void print(const PropertyResult& r, const Expected<std::string, checker::NoEvidence>& why) {
  if (why) {
    std::cout << *why;
    return;
  }
  std::cout << r.entry->name << " " << checker::to_string(r.outcome);
  if (!r.note.empty()) std::cout << " (" << r.note << ")";
  std::cout << "\n";
}

int cmd_run(const std::string& target, const std::string& trace_out,
            std::optional<std::uint64_t> seed) {
  auto s = scenarios::resolve(target);
  if (!s) {
    std::cerr << s.error().message() << "\n";
    return kUsage;
  }
  if (seed) s->seed = *seed;
  auto r = orchestration::run_task(*s);
  if (!trace_out.empty()) {
    std::ofstream out(trace_out, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << trace_out << "\n";
      return kUsage;
    }
    out << trace::encode(r.trace);
  }
  std::cout << "scenario " << s->name << "\n";
  std::cout << "status " << orchestration::to_string(r.response.status) << "\n";
  std::cout << "payload " << r.response.payload << "\n";
  for (const auto& [id, rec] : r.records)
    std::cout << "  " << id << " " << lifecycle::to_string(rec.state) << "\n";
  if (r.budget_exhausted)
    std::cout << "tick budget " << s->tick_budget << " exhausted, no response sent\n";
  std::cout << "ticks " << r.trace.back().tick << ", events " << r.trace.size() << "\n";
  return r.response.status == orchestration::ResponseStatus::kSuccess ? kPass : kFail;
}

int cmd_check(const std::string& target, const std::string& props, const std::string& fair,
              std::optional<std::size_t> cap_flag) {
  auto sel = selection(props);
  if (!sel) return sel.error();
  std::size_t cap = cap_flag.value_or(checker::state_cap_from_env());
  auto cfg = checker::named_model(target);
  if (!cfg) {
    auto s = scenarios::resolve(target);
    if (!s) {
      std::cerr << s.error().message() << "\n";
      return kUsage;
    }
    cfg = checker::model_from_scenario(*s);
  }
  auto k = checker::build_kripke(*cfg, cap);
  if (!k) {
    std::cerr << "state cap " << k.error().cap << " exceeded (reached " << k.error().reached
              << " states)\n";
    return kUsage;
  }
  bool is_fair = fair == "on";
  std::cout << "model " << target << ": " << k->size() << " states, " << k->edge_count()
            << " edges, fair " << fair << "\n";
  variant_notes(*sel);
  auto results = checker::check_model(*k, *sel, is_fair);
  bool all_hold = true;
  for (const auto& r : results) {
    if (!r.checked) {
      std::cout << r.entry->name << " skipped (" << r.note << ")\n";
      continue;
    }
    if (r.outcome != Outcome::kHolds) all_hold = false;
    print(r, checker::explain(r, *k));
  }
  return all_hold ? kPass : kFail;
}

int cmd_monitor(const std::string& path, const std::string& props) {
  auto sel = selection(props);
  if (!sel) return sel.error();
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "cannot read " << path << "\n";
    return kUsage;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  auto t = trace::decode(buf.str());
  if (!t) {
    std::cerr << path << ":" << t.error().line << ": " << t.error().message << "\n";
    return kUsage;
  }
  auto rep = trace::replay(*t);
  if (!rep) {
    std::cerr << path << ": event " << rep.error().seq << ": " << rep.error().message << "\n";
    return kUsage;
  }
  variant_notes(*sel);
  bool violated = false;
  for (const auto& r : checker::check_runtime(*rep, *sel)) {
    if (!r.checked) {
      std::cout << r.entry->name << " skipped (" << r.note << ")\n";
      continue;
    }
    if (r.outcome == Outcome::kViolated) violated = true;
    print(r, checker::explain(r, *rep));
  }
  return violated ? kFail : kPass;
}

int cmd_list() {
  for (const auto& e : tlogic::catalog()) {
    std::cout << e.name << "  " << tlogic::to_string(e.category) << "  " << e.summary;
    if (e.variant_of) std::cout << " [variant of " << *e.variant_of << "]";
    std::cout << "\n";
  }
  return kPass;
}

int cmd_explain(const std::string& name) {
  auto e = tlogic::find_property(name);
  if (!e) {
    std::cerr << "unknown property: " << name << "\n";
    return kUsage;
  }
  const auto& p = **e;
  std::cout << p.name << " (" << tlogic::to_string(p.category) << ")\n";
  std::cout << "  " << p.summary << "\n";
  std::cout << "  typeset:  " << p.typeset << "\n";
  std::cout << "  template: " << tlogic::render(p.formula) << "\n";
  if (p.variant_of) std::cout << "  variant of " << *p.variant_of << "\n";
  if (p.substitute) std::cout << "  ranges use " << *p.substitute << " instead\n";
  if (!p.notes.empty()) std::cout << "  notes: " << p.notes << "\n";
  return kPass;
}

int cmd_dump(const std::string& target) {
  auto s = scenarios::resolve(target);
  if (!s) {
    std::cerr << s.error().message() << "\n";
    return kUsage;
  }
  std::cout << scenarios::dump_scenario(*s);
  return kPass;
}

int cmd_kill_matrix() {
  auto rows = checker::kill_matrix(checker::state_cap_from_env());
  if (!rows) {
    std::cerr << rows.error() << "\n";
    return kUsage;
  }
  std::cout << checker::render_kill_matrix(*rows);
  for (const auto& r : *rows)
    if (r.killed_by.empty()) return kFail;
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"akv: agent orchestration lifecycle checker"};
  app.require_subcommand(1);

  std::string target, trace_out, props = "all", fair = "on", name;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> cap;

  auto* run = app.add_subcommand("run", "Run a scenario and print the response");
  run->add_option("scenario", target, "Builtin name or .scenario.json path")->required();
  run->add_option("--trace", trace_out, "Write the trace (.trace.jsonl)");
  run->add_option("--seed", seed, "Override the scenario seed");

  auto* check = app.add_subcommand("check", "Model-check catalog properties");
  check->add_option("target", target, "Scenario, or single / chain2 / big")->required();
  check->add_option("--props", props, "all, a range like TL1..TL14, or a list");
  check->add_option("--fair", fair)->check(CLI::IsMember({"on", "off"}));
  check->add_option("--cap", cap, "State cap (default AKV_STATE_CAP or 1000000)");

  auto* monitor = app.add_subcommand("monitor", "Monitor catalog properties over a trace");
  monitor->add_option("trace", target)->required();
  monitor->add_option("--props", props);

  auto* list = app.add_subcommand("list", "List catalog entries");
  auto* explain = app.add_subcommand("explain", "Show one catalog entry");
  explain->add_option("name", name)->required();
  auto* dump = app.add_subcommand("dump", "Print a scenario as JSON");
  dump->add_option("scenario", target)->required();
  auto* kill = app.add_subcommand("kill-matrix", "Print the mutation kill matrix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  if (*run) return cmd_run(target, trace_out, seed);
  if (*check) return cmd_check(target, props, fair, cap);
  if (*monitor) return cmd_monitor(target, props);
  if (*list) return cmd_list();
  if (*explain) return cmd_explain(name);
  if (*dump) return cmd_dump(target);
  if (*kill) return cmd_kill_matrix();
  return kUsage;
}
