// Copyright 2026 The distsched Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "distsched/harness.h"

#include <algorithm>

#include "distsched/error.h"

namespace distsched {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Event EventFromJson(const Json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    throw Error(ErrorCode::kParse, where + ": expected an object with 'type'");
  }
  const std::string type = j["type"].get<std::string>();
  auto reject_unknown = [&](std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : j.items()) {
      if (key == "type") continue;
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        throw Error(ErrorCode::kParse,
                    where + ": unknown field '" + key + "'");
      }
    }
  };
  if (type == "arrive") {
    reject_unknown({"pod"});
    if (!j.contains("pod")) {
      throw Error(ErrorCode::kParse, where + ": missing field 'pod'");
    }
    return ArriveEvent{PodFromJson(j["pod"], where + ".pod")};
  }
  if (type == "depart") {
    reject_unknown({"pod"});
    if (!j.contains("pod") || !j["pod"].is_string()) {
      throw Error(ErrorCode::kParse, where + ": 'pod' must be a pod id");
    }
    return DepartEvent{j["pod"].get<std::string>()};
  }
  if (type == "rebalance") {
    reject_unknown({"max_moves", "max_passes", "min_improvement"});
    return RebalanceEvent{RebalanceConfigFromJson(j, where)};
  }
  throw Error(ErrorCode::kParse, where + ": unknown event type '" + type + "'");
}

std::map<std::string, double> FactorSummary(const ClusterState& state,
                                            VarianceConvention convention) {
  std::map<std::string, double> factors;
  for (const auto& [label, entry] : ClusterReport(state, convention).labels) {
    factors[label] = entry.factor;
  }
  return factors;
}

}  // namespace

Scenario ScenarioFromJson(const Json& j) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kParse, "scenario: expected an object");
  }
  for (const auto& [key, value] : j.items()) {
    if (key != "initial" && key != "events" && key != "strict") {
      throw Error(ErrorCode::kParse, "scenario: unknown field '" + key + "'");
    }
  }
  Scenario scenario;
  if (!j.contains("initial")) {
    throw Error(ErrorCode::kParse, "scenario: missing field 'initial'");
  }
  try {
    scenario.initial = ClusterFromJson(j["initial"]);
  } catch (const Error& e) {
    throw Error(e.code(), std::string("initial.") + e.what());
  }
  if (j.contains("events")) {
    const Json& events = j["events"];
    if (!events.is_array()) {
      throw Error(ErrorCode::kParse, "events: expected an array");
    }
    for (size_t i = 0; i < events.size(); ++i) {
      scenario.events.push_back(
          EventFromJson(events[i], "events[" + std::to_string(i) + "]"));
    }
  }
  if (j.contains("strict")) {
    if (!j["strict"].is_boolean()) {
      throw Error(ErrorCode::kParse, "strict: expected a boolean");
    }
    scenario.strict = j["strict"].get<bool>();
  }
  return scenario;
}

Scenario LoadScenario(const std::filesystem::path& path) {
  Json j = ReadJsonFile(path);
  try {
    return ScenarioFromJson(j);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

Json EventToJson(const Event& event) {
  return std::visit(
      Overloaded{
          [](const ArriveEvent& e) -> Json {
            return {{"type", "arrive"}, {"pod", PodToJson(e.pod)}};
          },
          [](const DepartEvent& e) -> Json {
            return {{"type", "depart"}, {"pod", e.pod_id}};
          },
          [](const RebalanceEvent& e) -> Json {
            Json j = RebalanceConfigToJson(e.config);
            j["type"] = "rebalance";
            return j;
          },
      },
      event);
}

Json TranscriptRecord::ToJson() const {
  Json j = {{"index", index},
            {"event", EventToJson(event)},
            {"status", ok ? "ok" : "failed"},
            {"fingerprint_before", FingerprintHex(fingerprint_before)}};
  if (!ok) j["error"] = error;
  if (decision) j["decision"] = DecisionToJson(*decision);
  if (plan) j["plan"] = PlanToJson(*plan);
  j["factors"] = factors;
  return j;
}

std::string RunTranscript::ToJsonLines() const {
  std::string out;
  for (const auto& record : records) out += record.ToJson().dump() + "\n";
  return out;
}

RunTranscript RunScenario(const Scenario& scenario,
                          VarianceConvention convention) {
  RunTranscript transcript;
  ClusterState state = scenario.initial;
  for (size_t i = 0; i < scenario.events.size(); ++i) {
    TranscriptRecord record;
    record.index = i;
    record.event = scenario.events[i];
    record.fingerprint_before = state.Fingerprint();
    std::visit(
        Overloaded{
            [&](const ArriveEvent& e) {
              if (e.pod.labels.empty()) {
                throw Error(ErrorCode::kInvalidArgument,
                            "event " + std::to_string(i) + ": pod '" +
                                e.pod.id +
                                "' arrived without usage labels; labels must "
                                "be applied before a scheduling request");
              }
              try {
                record.decision = Place(state, e.pod, convention);
              } catch (const Error& err) {
                if (err.code() != ErrorCode::kUnschedulable || scenario.strict) {
                  throw;
                }
                record.ok = false;
                record.error = err.what();
                return;
              }
              state = Apply(state, *record.decision);
            },
            [&](const DepartEvent& e) {
              if (!state.NodeOf(e.pod_id)) {
                throw Error(ErrorCode::kInvalidArgument,
                            "event " + std::to_string(i) + ": pod '" +
                                e.pod_id + "' is not assigned");
              }
              state.RemovePod(e.pod_id);
            },
            [&](const RebalanceEvent& e) {
              record.plan = Rebalance(state, e.config, convention);
              state = ApplyPlan(state, *record.plan);
            },
        },
        scenario.events[i]);
    record.factors = FactorSummary(state, convention);
    transcript.records.push_back(std::move(record));
  }
  transcript.final_state = std::move(state);
  return transcript;
}

}  // namespace distsched
