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

#include "distsched/distributedness.h"

#include <algorithm>
#include <random>

#include "gtest/gtest.h"

#include "distsched/error.h"
#include "distsched/io.h"
#include "test_util.h"

namespace distsched {
namespace {

using testing::MakePod;
using testing::OracleVariance;

constexpr double kTol = 1e-9;
const std::vector<double> kDist1 = {2, 3, 4, 5, 1, 6, 1, 2, 8, 9};
const std::vector<double> kDist2 = {4, 5, 4, 4, 4, 4, 4, 4, 4, 4};

ClusterState Fixture(const char* name) {
  return LoadCluster(std::string(DISTSCHED_FIXTURE_DIR) + "/" + name);
}

TEST(VarianceTest, OracleFrozenValues) {
  // Sum of squared deviations of distribution 1 is 72.9.
  EXPECT_NEAR(OracleVariance(kDist1, true), 8.1, kTol);
  EXPECT_NEAR(OracleVariance(kDist1, false), 7.29, kTol);
  EXPECT_NEAR(OracleVariance(kDist2, true), 0.1, kTol);
  EXPECT_NEAR(OracleVariance(kDist2, false), 0.09, kTol);
}

TEST(VarianceTest, WorkedExample) {
  EXPECT_NEAR(Variance(kDist1, VarianceConvention::kSample), 8.1, kTol);
  EXPECT_NEAR(Variance(kDist2, VarianceConvention::kSample), 0.1, kTol);
  EXPECT_NEAR(Variance(kDist1, VarianceConvention::kPopulation), 7.29, kTol);
  EXPECT_NEAR(Variance(kDist2, VarianceConvention::kPopulation), 0.09, kTol);
}

TEST(VarianceTest, ConstantSeriesIsZero) {
  for (double c : {0.0, 3.0, -7.5, 1e6}) {
    std::vector<double> v(4, c);
    EXPECT_EQ(Variance(v, VarianceConvention::kSample), 0.0);
    EXPECT_EQ(Variance(v, VarianceConvention::kPopulation), 0.0);
  }
}

TEST(VarianceTest, Errors) {
  std::vector<double> empty;
  std::vector<double> one = {3.0};
  EXPECT_THROW(Variance(empty, VarianceConvention::kPopulation), Error);
  EXPECT_THROW(Variance(one, VarianceConvention::kSample), Error);
  EXPECT_EQ(Variance(one, VarianceConvention::kPopulation), 0.0);
  std::vector<int64_t> one_count = {3};
  EXPECT_THROW(CountVariance(one_count, VarianceConvention::kSample), Error);
}

TEST(VarianceTest, CountVarianceAgreesWithTwoPass) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int64_t> count(0, 50);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<int64_t> c(2 + trial % 15);
    for (auto& x : c) x = count(rng);
    std::vector<double> d(c.begin(), c.end());
    for (auto conv : {VarianceConvention::kSample,
                      VarianceConvention::kPopulation}) {
      double a = CountVariance(c, conv);
      double b = Variance(d, conv);
      EXPECT_NEAR(a, b, 1e-9 * std::max(1.0, b));
    }
    auto shuffled = c;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(CountVariance(c, VarianceConvention::kSample),
              CountVariance(shuffled, VarianceConvention::kSample));
  }
}

TEST(ConventionTest, ParseAndRender) {
  EXPECT_EQ(ParseConvention("sample"), VarianceConvention::kSample);
  EXPECT_EQ(ParseConvention("population"), VarianceConvention::kPopulation);
  EXPECT_EQ(ToString(VarianceConvention::kPopulation), "population");
  EXPECT_THROW(ParseConvention("biased"), Error);
}

TEST(CountVectorTest, WorkedExampleInCanonicalOrder) {
  auto state = Fixture("distribution1.json");
  auto label = ScopedLabel::Cluster(ParseLabel("cpu-high-always"));
  auto v = CountVector(state, label);
  // 10.220.45.148, .2, .34, .56, .89, 10.46.7.10, .129, .168, .204, .8
  EXPECT_EQ(v.counts, (std::vector<int64_t>{5, 4, 1, 3, 2, 8, 9, 1, 6, 2}));
  auto sorted = v.counts;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int64_t> listed(kDist1.begin(), kDist1.end());
  std::sort(listed.begin(), listed.end());
  EXPECT_EQ(sorted, listed);
  EXPECT_NEAR(DistributednessFactor(state, label, VarianceConvention::kSample),
              8.1, kTol);
  EXPECT_NEAR(DistributednessFactor(Fixture("distribution2.json"), label,
                                    VarianceConvention::kSample),
              0.1, kTol);
}

TEST(CountVectorTest, SmallCases) {
  auto base = ParseLabel("cpu-low-spike");
  auto label = ScopedLabel::Cluster(base);
  auto empty = ClusterState::Create({{"a", {}}, {"b", {}}, {"c", {}}}, {}, {});
  EXPECT_EQ(CountVector(empty, label).counts,
            (std::vector<int64_t>{0, 0, 0}));
  auto one = ClusterState::Create({{"a", {}}, {"b", {}}, {"c", {}}},
                                  {MakePod("p", {base})}, {{"p", "b"}});
  EXPECT_EQ(CountVector(one, label).counts, (std::vector<int64_t>{0, 1, 0}));
  auto unassigned = ClusterState::Create({{"a", {}}}, {MakePod("p", {base})},
                                         {});
  EXPECT_EQ(CountVector(unassigned, label).counts, (std::vector<int64_t>{0}));
  EXPECT_TRUE(CountVector(ClusterState{}, label).counts.empty());
}

TEST(CountVectorTest, ScopesDoNotInteract) {
  auto base = ParseLabel("cpu-low-spike");
  auto state = ClusterState::Create(
      {{"a", {}}, {"b", {}}},
      {MakePod("c1", {base}, ScopeLevel::kCluster, "pay", "gw"),
       MakePod("n1", {base}, ScopeLevel::kNamespace, "pay", "gw"),
       MakePod("a1", {base}, ScopeLevel::kApplication, "pay", "gw"),
       MakePod("a2", {base}, ScopeLevel::kApplication, "pay", "gw")},
      {{"c1", "a"}, {"n1", "b"}, {"a1", "a"}, {"a2", "b"}});
  EXPECT_EQ(CountVector(state, ScopedLabel::Cluster(base)).counts,
            (std::vector<int64_t>{1, 0}));
  EXPECT_EQ(CountVector(state, ScopedLabel::Namespaced(base, "pay")).counts,
            (std::vector<int64_t>{0, 1}));
  EXPECT_EQ(
      CountVector(state, ScopedLabel::Application(base, "pay", "gw")).counts,
      (std::vector<int64_t>{1, 1}));
}

TEST(FactorTest, SingleNodePopulationIsZero) {
  auto base = ParseLabel("memory-high-always");
  auto state = ClusterState::Create({{"only", {}}},
                                    {MakePod("p", {base}), MakePod("q", {base})},
                                    {{"p", "only"}, {"q", "only"}});
  EXPECT_EQ(DistributednessFactor(state, ScopedLabel::Cluster(base),
                                  VarianceConvention::kPopulation),
            0.0);
  EXPECT_THROW(DistributednessFactor(state, ScopedLabel::Cluster(base),
                                     VarianceConvention::kSample),
               Error);
}

TEST(ReportTest, EntriesMatchStandaloneFactors) {
  EXPECT_TRUE(ClusterReport(ClusterState{}, VarianceConvention::kSample)
                  .labels.empty());
  auto d1 = ClusterReport(Fixture("distribution1.json"),
                          VarianceConvention::kSample);
  ASSERT_EQ(d1.labels.size(), 1u);
  EXPECT_NEAR(d1.labels.at("cpu-high-always").factor, 8.1, kTol);

  auto cpu = ParseLabel("cpu-high-always");
  auto mem = ParseLabel("memory-low-spike");
  auto state = ClusterState::Create(
      {{"a", {}}, {"b", {}}, {"c", {}}},
      {MakePod("p1", {cpu, mem}), MakePod("p2", {cpu}), MakePod("p3", {mem}),
       MakePod("p4", {cpu}), MakePod("idle", {mem})},
      {{"p1", "a"}, {"p2", "a"}, {"p3", "b"}, {"p4", "c"}});
  auto report = ClusterReport(state, VarianceConvention::kSample);
  ASSERT_EQ(report.labels.size(), 2u);
  EXPECT_EQ(report.labels.begin()->first, "cpu-high-always");
  // cpu [2,0,1] -> 1.0; memory [1,1,0] -> 1/3.
  EXPECT_NEAR(report.labels.at("cpu-high-always").factor,
              OracleVariance(std::vector<double>{2, 0, 1}, true), kTol);
  EXPECT_NEAR(report.labels.at("memory-low-spike").factor,
              OracleVariance(std::vector<double>{1, 1, 0}, true), kTol);
  for (const auto& [label, entry] : report.labels) {
    auto scoped = ScopedLabel::Cluster(ParseLabel(label));
    EXPECT_EQ(entry.factor, DistributednessFactor(
                                state, scoped, VarianceConvention::kSample));
  }
}

TEST(IndexTest, CountConservationUnderRandomAssignments) {
  std::mt19937 rng(5);
  testing::RandomClusterOptions opt;
  opt.mixed_scopes = true;
  opt.multi_label = true;
  for (int trial = 0; trial < 200; ++trial) {
    auto state = testing::RandomCluster(rng, opt);
    auto report = ClusterReport(state, VarianceConvention::kPopulation);
    for (const auto& [label, entry] : report.labels) {
      int64_t carrying = 0;
      for (const auto& [pod_id, node] : state.assignment()) {
        auto rendered = RenderedScopedLabels(*state.FindPod(pod_id));
        carrying += std::count(rendered.begin(), rendered.end(), label);
      }
      int64_t sum = 0;
      for (auto c : entry.counts) sum += c;
      EXPECT_EQ(sum, carrying);
      EXPECT_EQ(entry.counts,
                testing::OracleCounts(testing::NodeIds(state), state.pods(),
                                      state.assignment(), label));
      EXPECT_NEAR(entry.factor, OracleVariance(entry.counts, false), kTol);
    }
  }
}

}  // namespace
}  // namespace distsched
