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

// Command-line front end: report, schedule, rebalance, label, simulate.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "distsched/error.h"
#include "distsched/harness.h"
#include "distsched/io.h"
#include "distsched/labeler.h"

namespace {

using namespace distsched;

constexpr int kExitError = 1;
constexpr int kExitUnschedulable = 2;

struct GlobalOptions {
  std::string convention;
  std::string format = "table";
};

VarianceConvention ResolveConvention(const GlobalOptions& global) {
  if (!global.convention.empty()) return ParseConvention(global.convention);
  if (const char* env = std::getenv("DISTSCHED_CONVENTION");
      env != nullptr && *env != '\0') {
    return ParseConvention(env);
  }
  return VarianceConvention::kSample;
}

bool JsonOutput(const GlobalOptions& global) { return global.format == "json"; }

int RunReport(const GlobalOptions& global, const std::string& cluster_path) {
  ClusterState state = LoadCluster(cluster_path);
  auto report = ClusterReport(state, ResolveConvention(global));
  if (JsonOutput(global)) {
    std::cout << ReportToJson(report).dump(2) << "\n";
  } else {
    std::cout << ReportToTable(report, state);
  }
  return 0;
}

struct ScheduleArgs {
  std::string cluster;
  std::string pod;
  bool apply = false;
  std::string out;
  bool explain = false;
};

int RunSchedule(const GlobalOptions& global, const ScheduleArgs& args) {
  ClusterState state = LoadCluster(args.cluster);
  PodSpec pod = LoadPod(args.pod);
  PlacementDecision decision = Place(state, pod, ResolveConvention(global));
  if (JsonOutput(global)) {
    std::cout << DecisionToJson(decision).dump(2) << "\n";
  } else if (!args.explain) {
    std::cout << decision.pod_id() << " -> " << decision.chosen_node << "\n";
  }
  if (args.explain) std::cout << DecisionToTable(decision);
  if (args.apply) SaveCluster(Apply(state, decision), args.out);
  return 0;
}

struct RebalanceArgs {
  std::string cluster;
  RebalanceConfig config;
  std::string plan_out;
  bool apply = false;
  std::string out;
};

int RunRebalance(const GlobalOptions& global, const RebalanceArgs& args) {
  ClusterState state = LoadCluster(args.cluster);
  RebalancePlan plan =
      Rebalance(state, args.config, ResolveConvention(global));
  if (JsonOutput(global)) {
    std::cout << PlanToJson(plan).dump(2) << "\n";
  } else {
    std::cout << PlanToTable(plan);
  }
  if (!args.plan_out.empty()) {
    WriteTextFile(args.plan_out, PlanToJson(plan).dump(2) + "\n");
  }
  if (args.apply) SaveCluster(ApplyPlan(state, plan), args.out);
  return 0;
}

struct LabelArgs {
  std::string usage;
  std::string config;
  std::string out;
  std::string ns = "default";
  std::string scope = "cluster";
};

int RunLabel(const GlobalOptions& global, const LabelArgs& args) {
  LabelerConfig config;
  if (!args.config.empty()) {
    config = LabelerConfigFromJson(ReadJsonFile(args.config));
  }
  ScopeLevel scope = ParseScopeLevel(args.scope);
  std::vector<PodSpec> pods;
  for (const auto& [pod_id, usage] : LoadUsage(args.usage)) {
    PodSpec pod;
    pod.id = pod_id;
    pod.ns = args.ns;
    pod.application = pod_id;
    pod.scope = scope;
    try {
      pod.labels = DeriveLabels(usage, config);
    } catch (const Error& e) {
      throw Error(e.code(), "pod '" + pod_id + "': " + e.what());
    }
    pods.push_back(NormalizePod(std::move(pod)));
  }
  Json out = PodsToJson(pods);
  WriteTextFile(args.out, out.dump(2) + "\n");
  if (JsonOutput(global)) {
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& pod : pods) {
      std::cout << pod.id << ":";
      for (const auto& label : pod.labels) std::cout << " " << label.ToString();
      std::cout << "\n";
    }
  }
  return 0;
}

struct SimulateArgs {
  std::string scenario;
  std::string transcript;
  bool strict = false;
};

int RunSimulate(const GlobalOptions& global, const SimulateArgs& args) {
  Scenario scenario = LoadScenario(args.scenario);
  if (args.strict) scenario.strict = true;
  VarianceConvention convention = ResolveConvention(global);
  RunTranscript transcript = RunScenario(scenario, convention);
  if (args.transcript.empty()) {
    std::cout << transcript.ToJsonLines();
    return 0;
  }
  WriteTextFile(args.transcript, transcript.ToJsonLines());
  auto report = ClusterReport(transcript.final_state, convention);
  if (JsonOutput(global)) {
    std::cout << ReportToJson(report).dump(2) << "\n";
  } else {
    size_t failed = 0;
    for (const auto& r : transcript.records) failed += r.ok ? 0 : 1;
    std::cout << transcript.records.size() << " event(s), " << failed
              << " failed\n"
              << ReportToTable(report, transcript.final_state);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variance-minimizing pod spreading engine and simulator",
               "distsched"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--convention", global.convention,
                 "Variance divisor (overrides DISTSCHED_CONVENTION)")
      ->check(CLI::IsMember({"sample", "population"}));
  app.add_option("--format", global.format, "Output format")
      ->check(CLI::IsMember({"json", "table"}));

  std::string report_cluster;
  auto* report = app.add_subcommand("report", "Per-label count vectors and factors");
  report->add_option("--cluster", report_cluster, "Cluster snapshot")->required();

  ScheduleArgs schedule_args;
  auto* schedule = app.add_subcommand("schedule", "Place one pod");
  schedule->add_option("--cluster", schedule_args.cluster, "Cluster snapshot")
      ->required();
  schedule->add_option("--pod", schedule_args.pod, "Pod spec file")->required();
  auto* schedule_out =
      schedule->add_option("--out", schedule_args.out, "Updated snapshot path");
  schedule->add_flag("--apply", schedule_args.apply,
                     "Write the state with the pod assigned")
      ->needs(schedule_out);
  schedule->add_flag("--explain", schedule_args.explain,
                     "Print the per-node score table");

  RebalanceArgs rebalance_args;
  auto* rebalance = app.add_subcommand("rebalance", "Plan pod relocations");
  rebalance->add_option("--cluster", rebalance_args.cluster, "Cluster snapshot")
      ->required();
  rebalance->add_option("--max-moves", rebalance_args.config.max_moves)
      ->check(CLI::PositiveNumber);
  rebalance->add_option("--max-passes", rebalance_args.config.max_passes)
      ->check(CLI::PositiveNumber);
  rebalance->add_option("--min-improvement",
                        rebalance_args.config.min_improvement)
      ->check(CLI::NonNegativeNumber);
  rebalance->add_option("--plan-out", rebalance_args.plan_out, "Plan JSON path");
  auto* rebalance_out =
      rebalance->add_option("--out", rebalance_args.out, "Updated snapshot path");
  rebalance->add_flag("--apply", rebalance_args.apply,
                      "Write the state after replaying the plan")
      ->needs(rebalance_out);

  LabelArgs label_args;
  auto* label = app.add_subcommand("label", "Derive usage labels from series");
  label->add_option("--usage", label_args.usage, "Usage file (.json or .csv)")
      ->required();
  label->add_option("--config", label_args.config, "Labeler config JSON");
  label->add_option("--out", label_args.out, "Pods file to write")->required();
  label->add_option("--namespace", label_args.ns, "Namespace of the pods");
  label->add_option("--scope", label_args.scope, "Spreading scope of the pods")
      ->check(CLI::IsMember({"cluster", "namespace", "application"}));

  SimulateArgs simulate_args;
  auto* simulate = app.add_subcommand("simulate", "Replay a scenario");
  simulate->add_option("--scenario", simulate_args.scenario, "Scenario file")
      ->required();
  simulate->add_option("--transcript", simulate_args.transcript,
                       "JSON-lines transcript path (default: stdout)");
  simulate->add_flag("--strict", simulate_args.strict,
                     "Abort on the first unschedulable arrival");

  CLI11_PARSE(app, argc, argv);

  try {
    if (report->parsed()) return RunReport(global, report_cluster);
    if (schedule->parsed()) return RunSchedule(global, schedule_args);
    if (rebalance->parsed()) return RunRebalance(global, rebalance_args);
    if (label->parsed()) return RunLabel(global, label_args);
    if (simulate->parsed()) return RunSimulate(global, simulate_args);
  } catch (const Error& e) {
    std::cerr << "error (" << ErrorCodeName(e.code()) << "): " << e.what()
              << "\n";
    return e.code() == ErrorCode::kUnschedulable ? kExitUnschedulable
                                                 : kExitError;
  }
  return kExitError;
}
