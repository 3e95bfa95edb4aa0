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

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "distsched/io.h"
#include "distsched/rebalancer.h"
#include "distsched/scheduler.h"

namespace distsched {

struct ArriveEvent {
  PodSpec pod;
};
struct DepartEvent {
  std::string pod_id;
};
struct RebalanceEvent {
  RebalanceConfig config;
};
using Event = std::variant<ArriveEvent, DepartEvent, RebalanceEvent>;

struct Scenario {
  ClusterState initial;
  std::vector<Event> events;
  // Abort on the first unschedulable arrival instead of recording it.
  bool strict = false;
};

Scenario ScenarioFromJson(const Json& j);
Scenario LoadScenario(const std::filesystem::path& path);
Json EventToJson(const Event& event);

struct TranscriptRecord {
  size_t index = 0;
  Event event;
  bool ok = true;
  std::string error;
  uint64_t fingerprint_before = 0;
  std::optional<PlacementDecision> decision;
  std::optional<RebalancePlan> plan;
  // Per-label factors after the event.
  std::map<std::string, double> factors;

  Json ToJson() const;
};

struct RunTranscript {
  std::vector<TranscriptRecord> records;
  ClusterState final_state;

  // One JSON object per line, one line per event.
  std::string ToJsonLines() const;
};

// Replays the events in order: arrivals are placed and applied, departures
// remove the pod, rebalance events apply the whole plan. An arrival without
// usage labels or a departure of an unassigned pod throws
// Error(kInvalidArgument). An unschedulable arrival is recorded as failed,
// or rethrown when the scenario is strict.
RunTranscript RunScenario(const Scenario& scenario,
                          VarianceConvention convention);

}  // namespace distsched
