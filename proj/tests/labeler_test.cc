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

#include "distsched/labeler.h"

#include <random>

#include "gtest/gtest.h"

#include "distsched/error.h"

namespace distsched {
namespace {

using std::chrono::seconds;

UsageSeries Series(const std::vector<double>& fractions, double capacity = 1.0,
                   ResourceKind resource = ResourceKind::kCpu) {
  UsageSeries s;
  s.resource = resource;
  s.capacity = capacity;
  Timestamp t0{std::chrono::sys_days{std::chrono::year{2025} / 3 / 1}};
  for (size_t i = 0; i < fractions.size(); ++i) {
    s.samples.push_back({t0 + seconds(60 * i), fractions[i] * capacity});
  }
  return s;
}

std::vector<double> Ramp() {
  std::vector<double> v;
  for (int i = 0; i < 10; ++i) v.push_back(0.1 + 0.8 * i / 9.0);
  return v;
}

LabelerConfig Defaults() { return LabelerConfig{}; }

TEST(MagnitudeTest, ConstantSeries) {
  EXPECT_EQ(ClassifyMagnitude(Series({0.9, 0.9, 0.9}), Defaults()),
            Magnitude::kHigh);
  EXPECT_EQ(ClassifyMagnitude(Series({0.5, 0.5, 0.5}), Defaults()),
            Magnitude::kMedium);
  EXPECT_EQ(ClassifyMagnitude(Series({0.1, 0.1}), Defaults()), Magnitude::kLow);
}

// mean(0.1, 0.1, 0.1, 0.9) = 0.3 < 0.33; max = 0.9 >= 0.66.
TEST(MagnitudeTest, MeanVersusPeak) {
  auto series = Series({0.1, 0.1, 0.1, 0.9}, 4.0);
  LabelerConfig peak;
  peak.magnitude_mode = MagnitudeMode::kPeak;
  EXPECT_EQ(ClassifyMagnitude(series, peak), Magnitude::kHigh);
  EXPECT_EQ(ClassifyMagnitude(series, Defaults()), Magnitude::kLow);
}

TEST(MagnitudeTest, HalfOpenBoundaries) {
  UsageSeries low_edge = Series({0, 0});
  low_edge.capacity = 100;
  low_edge.samples[0].value = low_edge.samples[1].value = 33;
  EXPECT_EQ(ClassifyMagnitude(low_edge, Defaults()), Magnitude::kMedium);
  UsageSeries high_edge = low_edge;
  high_edge.samples[0].value = high_edge.samples[1].value = 66;
  EXPECT_EQ(ClassifyMagnitude(high_edge, Defaults()), Magnitude::kHigh);
  UsageSeries below = low_edge;
  below.samples[0].value = below.samples[1].value = 32.999;
  EXPECT_EQ(ClassifyMagnitude(below, Defaults()), Magnitude::kLow);
}

TEST(MagnitudeTest, MonotoneUnderPointwiseIncrease) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> a(2 + trial % 9), b;
    for (auto& v : a) v = u(rng);
    for (double v : a) b.push_back(v + u(rng) * 0.5);
    for (auto mode : {MagnitudeMode::kMean, MagnitudeMode::kPeak}) {
      LabelerConfig config;
      config.magnitude_mode = mode;
      EXPECT_LE(ClassifyMagnitude(Series(a), config),
                ClassifyMagnitude(Series(b), config));
    }
  }
}

TEST(MagnitudeTest, InsufficientData) {
  try {
    ClassifyMagnitude(Series({0.5}), Defaults());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientData);
  }
}

TEST(PatternTest, ConstantIsAlways) {
  UsageSeries s = Series({5, 5, 5, 5});
  EXPECT_DOUBLE_EQ(CoefficientOfVariation(s), 0.0);
  EXPECT_EQ(ClassifyPattern(s, Defaults()), Pattern::kAlways);
}

// Exactly linear 0.1 -> 0.9 over the window: slope 0.8.
TEST(PatternTest, RampIsGradual) {
  auto s = Series(Ramp(), 2.0);
  EXPECT_NEAR(NormalizedTrendSlope(s), 0.8, 1e-12);
  EXPECT_GT(CoefficientOfVariation(s), 0.15);
  EXPECT_EQ(ClassifyPattern(s, Defaults()), Pattern::kGradual);
  auto down = Ramp();
  std::reverse(down.begin(), down.end());
  EXPECT_NEAR(NormalizedTrendSlope(Series(down)), -0.8, 1e-12);
  EXPECT_EQ(ClassifyPattern(Series(down), Defaults()), Pattern::kGradual);
}

// [0.1 x4, 0.9, 0.1 x5]: mean 0.18, population sd 0.24, cv 4/3; slope
// 0.8 * (4/9 - 1/2) / (82.5 / 81) = -0.04364.
TEST(PatternTest, MidWindowBurstIsSpike) {
  auto s = Series({0.1, 0.1, 0.1, 0.1, 0.9, 0.1, 0.1, 0.1, 0.1, 0.1});
  EXPECT_NEAR(CoefficientOfVariation(s), 4.0 / 3.0, 1e-12);
  EXPECT_NEAR(NormalizedTrendSlope(s), 0.8 * (4.0 / 9.0 - 0.5) / (82.5 / 81.0),
              1e-12);
  EXPECT_EQ(ClassifyPattern(s, Defaults()), Pattern::kSpike);
}

// [0.1 x9, 0.9]: cv 4/3, but the single trailing burst pulls the
// least-squares slope to 0.4 / (82.5 / 81) = 0.39273, above 0.30.
TEST(PatternTest, TrailingBurstTrendsAboveGradualThreshold) {
  auto s = Series({0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.9});
  EXPECT_NEAR(CoefficientOfVariation(s), 4.0 / 3.0, 1e-12);
  EXPECT_NEAR(NormalizedTrendSlope(s), 0.4 / (82.5 / 81.0), 1e-12);
  EXPECT_EQ(ClassifyPattern(s, Defaults()), Pattern::kGradual);
  LabelerConfig strict_trend;
  strict_trend.slope_gradual_min = 0.4;
  EXPECT_EQ(ClassifyPattern(s, strict_trend), Pattern::kSpike);
}

TEST(PatternTest, UnevenSpacingWeightsFit) {
  // Values 0, 0, 1 at t = 0, 1, 10 minutes (normalized 0, 0.1, 1).
  UsageSeries s = Series({0, 0, 1});
  s.samples[1].time = s.samples[0].time + seconds(60);
  s.samples[2].time = s.samples[0].time + seconds(600);
  // tbar = 1.1/3, ybar = 1/3; sxy = 2/3 - 1.1/9, sxx = 1.01 - 1.21/3.
  double tbar = 1.1 / 3.0;
  double sxy = (1.0 - tbar) * (2.0 / 3.0) - (0.0 - tbar) / 3.0 -
               (0.1 - tbar) / 3.0;
  double sxx = tbar * tbar + (0.1 - tbar) * (0.1 - tbar) +
               (1.0 - tbar) * (1.0 - tbar);
  EXPECT_NEAR(NormalizedTrendSlope(s), sxy / sxx, 1e-12);
}

TEST(PatternTest, IdenticalTimestampsFallBackToOrder) {
  UsageSeries s = Series(Ramp());
  for (auto& sample : s.samples) sample.time = s.samples[0].time;
  EXPECT_NEAR(NormalizedTrendSlope(s), 0.8, 1e-12);
}

TEST(PatternTest, AllZeroIsUnclassifiable) {
  try {
    ClassifyPattern(Series({0, 0, 0}), Defaults());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnclassifiable);
  }
}

TEST(PatternTest, ScaleInvariant) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> scale(0.01, 1000.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> v(3 + trial % 20);
    for (auto& x : v) x = u(rng);
    auto base = Series(v, 1.0);
    double c = scale(rng);
    auto scaled = Series(v, c);
    EXPECT_EQ(ClassifyPattern(base, Defaults()),
              ClassifyPattern(scaled, Defaults()));
    EXPECT_NEAR(CoefficientOfVariation(base), CoefficientOfVariation(scaled),
                1e-9);
  }
}

TEST(PatternTest, RejectsBadSeries) {
  auto negative = Series({0.5, -0.1});
  EXPECT_THROW(ClassifyPattern(negative, Defaults()), Error);
  auto backwards = Series({0.5, 0.6});
  std::swap(backwards.samples[0].time, backwards.samples[1].time);
  EXPECT_THROW(ClassifyPattern(backwards, Defaults()), Error);
  auto zero_cap = Series({0.5, 0.6});
  zero_cap.capacity = 0;
  EXPECT_THROW(ClassifyMagnitude(zero_cap, Defaults()), Error);
}

TEST(ConfigTest, Validation) {
  LabelerConfig bad;
  bad.low_cutoff = 0.7;
  EXPECT_THROW(ValidateConfig(bad), Error);
  bad = {};
  bad.high_cutoff = 1.0;
  EXPECT_THROW(ValidateConfig(bad), Error);
  bad = {};
  bad.cv_always_max = -0.1;
  EXPECT_THROW(ValidateConfig(bad), Error);
  EXPECT_NO_THROW(ValidateConfig(LabelerConfig{}));
}

TEST(DeriveLabelsTest, Compositions) {
  EXPECT_TRUE(DeriveLabels({}, Defaults()).empty());

  auto labels = DeriveLabels({{ResourceKind::kCpu, Series({0.9, 0.9, 0.9})}},
                             Defaults());
  ASSERT_EQ(labels.size(), 1u);
  EXPECT_EQ(labels[0].ToString(), "cpu-high-always");

  std::map<ResourceKind, UsageSeries> usage = {
      {ResourceKind::kCpu, Series(Ramp(), 4.0)},
      {ResourceKind::kMemory,
       Series({0.5, 0.5, 0.5, 0.5}, 8192, ResourceKind::kMemory)}};
  labels = DeriveLabels(usage, Defaults());
  ASSERT_EQ(labels.size(), 2u);
  // The ramp averages 0.5 and peaks at 0.9.
  EXPECT_EQ(labels[0].ToString(), "cpu-medium-gradual");
  EXPECT_EQ(labels[1].ToString(), "memory-medium-always");
  LabelerConfig peak;
  peak.magnitude_mode = MagnitudeMode::kPeak;
  EXPECT_EQ(DeriveLabels(usage, peak)[0].ToString(), "cpu-high-gradual");
  EXPECT_EQ(DeriveLabels(usage, peak), DeriveLabels(usage, peak));
}

TEST(DeriveLabelsTest, ErrorsNameTheResource) {
  std::map<ResourceKind, UsageSeries> usage = {
      {ResourceKind::kNetwork, Series({0, 0}, 1.0, ResourceKind::kNetwork)}};
  try {
    DeriveLabels(usage, Defaults());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnclassifiable);
    EXPECT_EQ(std::string(e.what()).rfind("network:", 0), 0u);
  }
}

}  // namespace
}  // namespace distsched
