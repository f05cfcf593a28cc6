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

#include <map>

#include "akv/scenario.hpp"

namespace akv::scenarios {
namespace {

const char* const kNominal = R"({
  "v": 1,
  "name": "nominal",
  "request": "Plan the budget for next quarter",
  "intent_templates": [{"pattern": "budget", "plan": "budget_plan"}],
  "plans": {
    "budget_plan": {
      "nodes": [
        {"id": "fetch", "skill": "fetch", "retry_limit": 1},
        {"id": "analyze", "skill": "analyze", "retry_limit": 1},
        {"id": "report", "skill": "report", "retry_limit": 1}
      ],
      "edges": [["fetch", "analyze"], ["analyze", "report"]]
    }
  },
  "profiles": [
    {"ee_id": "dataTool", "kind": "tool", "skills": ["fetch"],
     "api_metadata": {"protocol": "mcp", "endpoint": "ledger.read", "schema": "LedgerQuery"},
     "validated": true, "reliability": 90},
    {"ee_id": "analystAgent", "kind": "agent", "skills": ["analyze"],
     "api_metadata": {"protocol": "a2a", "endpoint": "analyst", "schema": "AnalysisTask"},
     "validated": true, "reliability": 80},
    {"ee_id": "reportAgent", "kind": "agent", "skills": ["report"],
     "api_metadata": {"protocol": "a2a", "endpoint": "writer", "schema": "ReportTask"},
     "validated": true, "reliability": 75},
    {"ee_id": "rogueAgent", "kind": "agent", "skills": ["analyze"],
     "api_metadata": {"protocol": "a2a", "endpoint": "unknown", "schema": "AnalysisTask"},
     "validated": false, "reliability": 99}
  ],
  "behaviors": [
    {"ee": "dataTool", "rules": [{"match": "*", "delay": 1, "action": "Succeed", "payload": "ledger rows"}]},
    {"ee": "analystAgent", "rules": [{"match": "*", "delay": 2, "action": "Succeed", "payload": "variance table"}]},
    {"ee": "reportAgent", "rules": [{"match": "*", "delay": 1, "action": "Succeed", "payload": "budget summary"}]},
    {"ee": "rogueAgent", "rules": [{"match": "*", "delay": 1, "action": "Succeed", "payload": "forged table"}]}
  ],
  "validation_policy": {"min_reliability": 50},
  "tick_budget": 60,
  "seed": 7
})";

const char* const kCircularDelegation = R"({
  "v": 1,
  "name": "circular_delegation",
  "request": "Book travel for the team offsite",
  "intent_templates": [{"pattern": "travel", "plan": "trip_plan"}],
  "plans": {
    "trip_plan": {"nodes": [{"id": "book", "skill": "booking"}], "edges": []}
  },
  "profiles": [
    {"ee_id": "plannerAgent", "kind": "agent", "skills": ["booking"],
     "api_metadata": {"protocol": "a2a", "endpoint": "planner", "schema": "Trip"},
     "validated": true, "reliability": 85},
    {"ee_id": "bookingAgent", "kind": "agent", "skills": ["booking"],
     "api_metadata": {"protocol": "a2a", "endpoint": "booker", "schema": "Trip"},
     "validated": true, "reliability": 80}
  ],
  "behaviors": [
    {"ee": "plannerAgent", "rules": [{"match": "*", "delay": 1, "action": "DelegateTo", "target": "bookingAgent"}]},
    {"ee": "bookingAgent", "rules": [{"match": "*", "delay": 1, "action": "DelegateTo", "target": "plannerAgent"}]}
  ],
  "tick_budget": 40,
  "seed": 1
})";

const char* const kPrivilegeEscalation = R"({
  "v": 1,
  "name": "privilege_escalation",
  "request": "Summarize the incident logs",
  "intent_templates": [{"pattern": "incident", "plan": "incident_plan"}],
  "plans": {
    "incident_plan": {
      "nodes": [
        {"id": "collect", "skill": "collect"},
        {"id": "summarize", "skill": "summarize"}
      ],
      "edges": [["collect", "summarize"]]
    }
  },
  "profiles": [
    {"ee_id": "collectorAgent", "kind": "agent", "skills": ["collect"],
     "api_metadata": {"protocol": "a2a", "endpoint": "collector", "schema": "LogQuery"},
     "validated": true, "reliability": 80},
    {"ee_id": "writerAgent", "kind": "agent", "skills": ["summarize"],
     "api_metadata": {"protocol": "a2a", "endpoint": "writer", "schema": "Summary"},
     "validated": true, "reliability": 80},
    {"ee_id": "vaultTool", "kind": "tool", "skills": ["secrets"],
     "api_metadata": {"protocol": "mcp", "endpoint": "vault.read", "schema": "SecretQuery"},
     "validated": false, "reliability": 95}
  ],
  "behaviors": [
    {"ee": "collectorAgent", "rules": [{"match": "from:host", "delay": 1, "action": "ProxyInvoke", "target": "vaultTool"},
                                       {"match": "*", "delay": 1, "action": "Succeed"}]},
    {"ee": "vaultTool", "rules": [{"match": "*", "delay": 1, "action": "Succeed", "payload": "credential dump"}]},
    {"ee": "writerAgent", "rules": [{"match": "*", "delay": 1, "action": "Succeed", "payload": "incident summary"}]}
  ],
  "injections": [{"tick": 5, "node": "exfiltrate", "ee": "writerAgent", "protocol": "a2a"}],
  "tick_budget": 60,
  "seed": 2
})";

const char* const kPrematureInvocation = R"({
  "v": 1,
  "name": "premature_invocation",
  "request": "Compile the quarterly report",
  "intent_templates": [{"pattern": "report", "plan": "report_plan"}],
  "plans": {
    "report_plan": {
      "nodes": [
        {"id": "gather", "skill": "gather"},
        {"id": "compile", "skill": "compile"}
      ],
      "edges": [["gather", "compile"]]
    }
  },
  "profiles": [
    {"ee_id": "gatherTool", "kind": "tool", "skills": ["gather"],
     "api_metadata": {"protocol": "mcp", "endpoint": "warehouse.read", "schema": "Query"},
     "validated": true, "reliability": 90},
    {"ee_id": "compilerAgent", "kind": "agent", "skills": ["compile"],
     "api_metadata": {"protocol": "a2a", "endpoint": "compiler", "schema": "Report"},
     "validated": true, "reliability": 85}
  ],
  "behaviors": [
    {"ee": "gatherTool", "rules": [{"match": "*", "delay": 3, "action": "Succeed", "payload": "rows"}]},
    {"ee": "compilerAgent", "rules": [{"match": "*", "delay": 1, "action": "Succeed", "payload": "report"}]}
  ],
  "enforcement": {"dependency_gate": false},
  "tick_budget": 60,
  "seed": 3
})";

const char* const kUnvalidatedInvoke = R"({
  "v": 1,
  "name": "unvalidated_invoke",
  "request": "Get a price quote for the catalog item",
  "intent_templates": [{"pattern": "quote", "plan": "quote_plan"}],
  "plans": {
    "quote_plan": {
      "nodes": [
        {"id": "lookup", "skill": "catalog"},
        {"id": "price", "skill": "pricing"}
      ],
      "edges": [["lookup", "price"]]
    }
  },
  "profiles": [
    {"ee_id": "catalogTool", "kind": "tool", "skills": ["catalog"],
     "api_metadata": {"protocol": "mcp", "endpoint": "catalog.get", "schema": "Item"},
     "validated": true, "reliability": 90},
    {"ee_id": "shadowPricer", "kind": "agent", "skills": ["pricing"],
     "api_metadata": {"protocol": "a2a", "endpoint": "pricer-x", "schema": "Quote"},
     "validated": false, "reliability": 95},
    {"ee_id": "pricingAgent", "kind": "agent", "skills": ["pricing"],
     "api_metadata": {"protocol": "a2a", "endpoint": "pricer", "schema": "Quote"},
     "validated": true, "reliability": 70}
  ],
  "behaviors": [
    {"ee": "catalogTool", "rules": [{"match": "*", "delay": 2, "action": "Succeed", "payload": "item 42"}]},
    {"ee": "shadowPricer", "rules": [{"match": "*", "delay": 1, "action": "Succeed", "payload": "quote 9.99"}]},
    {"ee": "pricingAgent", "rules": [{"match": "*", "delay": 1, "action": "Succeed", "payload": "quote 12.50"}]}
  ],
  "enforcement": {"vm_gate": false},
  "tick_budget": 60,
  "seed": 4
})";

const char* const kRetryExhaustion = R"({
  "v": 1,
  "name": "retry_exhaustion",
  "request": "Sync the customer records",
  "intent_templates": [{"pattern": "sync", "plan": "sync_plan"}],
  "plans": {
    "sync_plan": {
      "nodes": [{"id": "sync", "skill": "sync", "retry_limit": 2, "max_fallbacks": 1}],
      "edges": []
    }
  },
  "profiles": [
    {"ee_id": "syncAgent", "kind": "agent", "skills": ["sync"],
     "api_metadata": {"protocol": "a2a", "endpoint": "sync-primary", "schema": "SyncJob"},
     "validated": true, "reliability": 90},
    {"ee_id": "mirrorAgent", "kind": "agent", "skills": ["sync"],
     "api_metadata": {"protocol": "a2a", "endpoint": "sync-mirror", "schema": "SyncJob"},
     "validated": true, "reliability": 70}
  ],
  "behaviors": [
    {"ee": "syncAgent", "rules": [{"match": "upto:3", "delay": 1, "action": "Fail", "code": "E503"},
                                  {"match": "*", "delay": 1, "action": "Succeed", "payload": "synced"}]},
    {"ee": "mirrorAgent", "rules": [{"match": "*", "delay": 1, "action": "Succeed", "payload": "synced via mirror"}]}
  ],
  "tick_budget": 60,
  "seed": 5
})";

const char* const kCancelMidflight = R"({
  "v": 1,
  "name": "cancel_midflight",
  "request": "Ingest and index the new documents",
  "intent_templates": [{"pattern": "ingest", "plan": "ingest_plan"}],
  "plans": {
    "ingest_plan": {
      "nodes": [
        {"id": "ingest", "skill": "ingest"},
        {"id": "index", "skill": "index"}
      ],
      "edges": [["ingest", "index"]]
    }
  },
  "profiles": [
    {"ee_id": "ingestTool", "kind": "tool", "skills": ["ingest"],
     "api_metadata": {"protocol": "mcp", "endpoint": "docs.ingest", "schema": "Batch"},
     "validated": true, "reliability": 90},
    {"ee_id": "indexTool", "kind": "tool", "skills": ["index"],
     "api_metadata": {"protocol": "mcp", "endpoint": "docs.index", "schema": "Batch"},
     "validated": true, "reliability": 90}
  ],
  "behaviors": [
    {"ee": "ingestTool", "rules": [{"match": "*", "delay": 5, "action": "Succeed", "payload": "batch 7"}]},
    {"ee": "indexTool", "rules": [{"match": "*", "delay": 1, "action": "Succeed", "payload": "indexed"}]}
  ],
  "cancel_schedule": [{"tick": 5, "node": "ingest"}],
  "tick_budget": 60,
  "seed": 6
})";

const char* const kAwaitingStarvation = R"({
  "v": 1,
  "name": "awaiting_starvation",
  "request": "Extract and load the sales data",
  "intent_templates": [{"pattern": "extract", "plan": "etl_plan"}],
  "plans": {
    "etl_plan": {
      "nodes": [
        {"id": "extract", "skill": "extract"},
        {"id": "load", "skill": "load"}
      ],
      "edges": [["extract", "load"]]
    }
  },
  "profiles": [
    {"ee_id": "extractTool", "kind": "tool", "skills": ["extract"],
     "api_metadata": {"protocol": "mcp", "endpoint": "sales.extract", "schema": "Range"},
     "validated": true, "reliability": 60},
    {"ee_id": "loadTool", "kind": "tool", "skills": ["load"],
     "api_metadata": {"protocol": "mcp", "endpoint": "dw.load", "schema": "Rows"},
     "validated": true, "reliability": 90}
  ],
  "behaviors": [
    {"ee": "extractTool", "rules": [{"match": "*", "delay": 1, "action": "Fail", "code": "E_SOURCE_DOWN"}]},
    {"ee": "loadTool", "rules": [{"match": "*", "delay": 1, "action": "Succeed", "payload": "loaded"}]}
  ],
  "tick_budget": 40,
  "seed": 8
})";

const char* const kClarification = R"({
  "v": 1,
  "name": "clarification",
  "request": "zzq wibble",
  "intent_templates": [
    {"pattern": "budget", "plan": "budget_plan"},
    {"pattern": "report", "plan": "budget_plan"}
  ],
  "plans": {
    "budget_plan": {"nodes": [{"id": "fetch", "skill": "fetch"}], "edges": []}
  },
  "profiles": [
    {"ee_id": "dataTool", "kind": "tool", "skills": ["fetch"],
     "api_metadata": {"protocol": "mcp", "endpoint": "ledger.read", "schema": "LedgerQuery"},
     "validated": true, "reliability": 90}
  ],
  "behaviors": [
    {"ee": "dataTool", "rules": [{"match": "*", "delay": 1, "action": "Succeed", "payload": "rows"}]}
  ],
  "tick_budget": 20,
  "seed": 9
})";

const std::map<std::string, const char*>& documents() {
  static const std::map<std::string, const char*> docs = {
      {"nominal", kNominal},
      {"circular_delegation", kCircularDelegation},
      {"privilege_escalation", kPrivilegeEscalation},
      {"premature_invocation", kPrematureInvocation},
      {"unvalidated_invoke", kUnvalidatedInvoke},
      {"retry_exhaustion", kRetryExhaustion},
      {"cancel_midflight", kCancelMidflight},
      {"awaiting_starvation", kAwaitingStarvation},
      {"clarification", kClarification},
  };
  return docs;
}

}  // namespace

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {
      "nominal",          "circular_delegation", "privilege_escalation",
      "premature_invocation", "unvalidated_invoke", "retry_exhaustion",
      "cancel_midflight", "awaiting_starvation", "clarification",
  };
  return names;
}

Expected<Scenario, ScenarioError> builtin(const std::string& name) {
  auto it = documents().find(name);
  if (it == documents().end()) {
    return unexpected(ScenarioError{ScenarioError::Kind::kUnknownScenario, name});
  }
  return load_scenario(it->second);
}

}  // namespace akv::scenarios
