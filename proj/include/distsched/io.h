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

#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "distsched/distributedness.h"
#include "distsched/labeler.h"
#include "distsched/model.h"
#include "distsched/rebalancer.h"
#include "distsched/scheduler.h"

namespace distsched {

using Json = nlohmann::json;

// pod id -> resource -> series
using UsageByPod = std::map<std::string, std::map<ResourceKind, UsageSeries>>;

// "2024-05-01T12:00:00Z", optional fractional seconds and +hh:mm offset.
Timestamp ParseIso8601(std::string_view text);
std::string FormatIso8601(Timestamp time);

// Parses a whole JSON document; syntax errors carry line and column.
Json ParseJson(std::string_view text, const std::string& source = "<input>");
Json ReadJsonFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, const std::string& text);

// All *FromJson functions reject unknown fields and report the offending
// field path, e.g. "pods[3].labels[0]".
PodSpec PodFromJson(const Json& j, const std::string& where = "pod");
Json PodToJson(const PodSpec& pod);

ClusterState ClusterFromJson(const Json& j);
Json ClusterToJson(const ClusterState& state);
ClusterState LoadCluster(const std::filesystem::path& path);
void SaveCluster(const ClusterState& state, const std::filesystem::path& path);

// A single pod object, or a pods file {"pods": [...]} holding one pod.
PodSpec LoadPod(const std::filesystem::path& path);
Json PodsToJson(const std::vector<PodSpec>& pods);

UsageByPod UsageFromJson(const Json& j);
// Columns pod_id,resource,timestamp,value,capacity with a header row.
UsageByPod UsageFromCsv(std::istream& in);
// Dispatches on the ".csv" extension; anything else is read as JSON.
UsageByPod LoadUsage(const std::filesystem::path& path);

LabelerConfig LabelerConfigFromJson(const Json& j);
RebalanceConfig RebalanceConfigFromJson(const Json& j,
                                        const std::string& where = "config");
Json RebalanceConfigToJson(const RebalanceConfig& config);

Json ReportToJson(const DistributednessReport& report);
std::string ReportToTable(const DistributednessReport& report,
                          const ClusterState& state);

Json DecisionToJson(const PlacementDecision& decision);
std::string DecisionToTable(const PlacementDecision& decision);

Json PlanToJson(const RebalancePlan& plan);
RebalancePlan PlanFromJson(const Json& j);
std::string PlanToTable(const RebalancePlan& plan);

}  // namespace distsched
