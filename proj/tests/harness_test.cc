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
#include <random>

#include "gtest/gtest.h"

#include "distsched/error.h"
#include "test_util.h"

namespace distsched {
namespace {

using testing::MakePod;

const UsageLabel kCpu = ParseLabel("cpu-high-always");

std::string FixturePath(const char* name) {
  return std::string(DISTSCHED_FIXTURE_DIR) + "/" + name;
}

TEST(ScenarioTest, RoundRobinArrivals) {
  auto scenario = LoadScenario(FixturePath("scenario_round_robin.json"));
  ASSERT_EQ(scenario.events.size(), 41u);
  auto transcript = RunScenario(scenario, VarianceConvention::kSample);
  ASSERT_EQ(transcript.records.size(), 41u);
  auto counts =
      CountVector(transcript.final_state, ScopedLabel::Cluster(kCpu)).counts;
  auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
  EXPECT_LE(*hi - *lo, 1);
  EXPECT_NEAR(transcript.records.back().factors.at("cpu-high-always"), 0.1,
              1e-9);
  for (const auto& record : transcript.records) {
    ASSERT_TRUE(record.decision);
    EXPECT_EQ(record.decision->state_fingerprint, record.fingerprint_before);
    double best = 1e300;
    for (const auto& s : record.decision->scores) {
      if (s.feasible) best = std::min(best, s.aggregate);
    }
    const auto& chosen = *std::find_if(
        record.decision->scores.begin(), record.decision->scores.end(),
        [&](const NodeScore& s) {
          return s.node_id == record.decision->chosen_node;
        });
    EXPECT_LE(chosen.aggregate, best + kTieTolerance);
  }
}

TEST(ScenarioTest, RebalanceEventReachesBalancedTotal) {
  auto scenario = LoadScenario(FixturePath("scenario_rebalance.json"));
  auto transcript = RunScenario(scenario, VarianceConvention::kSample);
  ASSERT_EQ(transcript.records.size(), 1u);
  ASSERT_TRUE(transcript.records[0].plan);
  EXPECT_NEAR(transcript.records[0].plan->final_total, 0.1, 1e-9);
  EXPECT_NEAR(TotalDistributedness(transcript.final_state,
                                   VarianceConvention::kSample),
              0.1, 1e-9);
}

TEST(ScenarioTest, EmptyScenario) {
  Scenario scenario;
  auto transcript = RunScenario(scenario, VarianceConvention::kSample);
  EXPECT_TRUE(transcript.records.empty());
  EXPECT_EQ(transcript.ToJsonLines(), "");
}

TEST(ScenarioTest, UnlabeledArrivalIsAnError) {
  Scenario scenario;
  scenario.initial = ClusterState::Create({{"a", {}}, {"b", {}}}, {}, {});
  scenario.events.push_back(ArriveEvent{MakePod("bare", {})});
  try {
    RunScenario(scenario, VarianceConvention::kSample);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
    EXPECT_NE(std::string(e.what()).find("without usage labels"),
              std::string::npos);
  }
}

TEST(ScenarioTest, UnschedulableArrivalRecordedOrStrict) {
  Scenario scenario;
  scenario.initial = ClusterState::Create({{"a", 1}, {"b", 1}}, {}, {});
  for (const char* id : {"p1", "p2", "p3", "p4"}) {
    scenario.events.push_back(ArriveEvent{MakePod(id, {kCpu})});
  }
  scenario.events.push_back(DepartEvent{"p1"});
  scenario.events.push_back(ArriveEvent{MakePod("p5", {kCpu})});
  auto transcript = RunScenario(scenario, VarianceConvention::kSample);
  ASSERT_EQ(transcript.records.size(), 6u);
  EXPECT_TRUE(transcript.records[1].ok);
  EXPECT_FALSE(transcript.records[2].ok);
  EXPECT_FALSE(transcript.records[3].ok);
  EXPECT_NE(transcript.records[2].error.find("unschedulable"),
            std::string::npos);
  EXPECT_TRUE(transcript.records[5].ok);
  EXPECT_EQ(transcript.final_state.NodeOf("p5"), "a");
  EXPECT_EQ(transcript.final_state.FindPod("p1"), nullptr);
  EXPECT_NE(transcript.ToJsonLines().find("\"status\":\"failed\""),
            std::string::npos);

  scenario.strict = true;
  try {
    RunScenario(scenario, VarianceConvention::kSample);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnschedulable);
  }
}

TEST(ScenarioTest, DepartingUnknownPodIsAnError) {
  Scenario scenario;
  scenario.initial = ClusterState::Create({{"a", {}}}, {}, {});
  scenario.events.push_back(DepartEvent{"ghost"});
  EXPECT_THROW(RunScenario(scenario, VarianceConvention::kPopulation), Error);
}

TEST(ScenarioTest, TranscriptIsDeterministic) {
  std::mt19937 rng(8);
  testing::RandomClusterOptions opt;
  opt.mixed_scopes = true;
  opt.max_pods = 12;
  for (int trial = 0; trial < 20; ++trial) {
    Scenario scenario;
    scenario.initial = testing::RandomCluster(rng, opt);
    for (int k = 0; k < 8; ++k) {
      scenario.events.push_back(ArriveEvent{
          MakePod("arrival-" + std::to_string(k), {testing::NthLabel(k % 3)},
                  kAllScopes[k % 3], "team-a", "api")});
    }
    scenario.events.push_back(RebalanceEvent{RebalanceConfig{}});
    scenario.events.push_back(DepartEvent{"arrival-0"});
    auto a = RunScenario(scenario, VarianceConvention::kSample).ToJsonLines();
    auto b = RunScenario(scenario, VarianceConvention::kSample).ToJsonLines();
    EXPECT_EQ(a, b);
    EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 10);
  }
}

TEST(ScenarioTest, JsonRoundTripAndErrors) {
  Scenario scenario;
  scenario.initial = ClusterState::Create({{"a", {}}, {"b", {}}}, {}, {});
  scenario.events.push_back(ArriveEvent{MakePod("p", {kCpu})});
  scenario.events.push_back(RebalanceEvent{{5, 2, 0.5}});
  scenario.events.push_back(DepartEvent{"p"});
  Json j = {{"initial", ClusterToJson(scenario.initial)},
            {"events", Json::array()}};
  for (const auto& e : scenario.events) j["events"].push_back(EventToJson(e));
  auto back = ScenarioFromJson(j);
  EXPECT_EQ(back.initial, scenario.initial);
  ASSERT_EQ(back.events.size(), 3u);
  EXPECT_EQ(std::get<RebalanceEvent>(back.events[1]).config.max_passes, 2);
  EXPECT_EQ(std::get<DepartEvent>(back.events[2]).pod_id, "p");

  j["events"].push_back({{"type", "evict"}});
  EXPECT_THROW(ScenarioFromJson(j), Error);
  j["events"].erase(3);
  j["speed"] = 2;
  EXPECT_THROW(ScenarioFromJson(j), Error);
}

}  // namespace
}  // namespace distsched
