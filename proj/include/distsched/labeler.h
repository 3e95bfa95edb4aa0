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

#include <chrono>
#include <map>
#include <vector>

#include "distsched/model.h"

namespace distsched {

using Timestamp = std::chrono::sys_time<std::chrono::microseconds>;

struct UsageSample {
  Timestamp time;
  double value = 0.0;

  friend bool operator==(const UsageSample&, const UsageSample&) = default;
};

// Historical usage of one resource, in the same units as `capacity`.
struct UsageSeries {
  ResourceKind resource = ResourceKind::kCpu;
  std::vector<UsageSample> samples;
  double capacity = 1.0;

  friend bool operator==(const UsageSeries&, const UsageSeries&) = default;
};

enum class MagnitudeMode { kMean, kPeak };

// Thresholds for turning a usage series into a label. The pattern
// discriminator (coefficient of variation, then least-squares trend) is a
// local construction; tune per workload.
struct LabelerConfig {
  MagnitudeMode magnitude_mode = MagnitudeMode::kMean;
  double low_cutoff = 0.33;
  double high_cutoff = 0.66;
  double cv_always_max = 0.15;
  double slope_gradual_min = 0.30;
};

// Throws Error(kInvalidArgument) on an inconsistent config.
void ValidateConfig(const LabelerConfig& config);

// Throws Error(kInsufficientData) for fewer than two samples and
// Error(kInvalidArgument) for negative values, non-positive capacity or
// decreasing timestamps.
void ValidateSeries(const UsageSeries& series);

// Utilization u = mean (or peak) / capacity, bucketed into the half-open
// intervals [0, low), [low, high), [high, inf).
Magnitude ClassifyMagnitude(const UsageSeries& series,
                            const LabelerConfig& config);

// Population coefficient of variation of the raw values.
double CoefficientOfVariation(const UsageSeries& series);

// Least-squares slope of value/capacity against time mapped onto [0, 1].
// Uneven timestamp spacing is honoured; if every timestamp is identical the
// sample order position is used instead.
double NormalizedTrendSlope(const UsageSeries& series);

// always if cv <= cv_always_max, else gradual if |slope| >=
// slope_gradual_min, else spike. An all-zero series throws
// Error(kUnclassifiable).
Pattern ClassifyPattern(const UsageSeries& series, const LabelerConfig& config);

// One label per resource present in `usage`. Per-series errors are rethrown
// with the resource kind prefixed to the message.
std::vector<UsageLabel> DeriveLabels(
    const std::map<ResourceKind, UsageSeries>& usage,
    const LabelerConfig& config);

}  // namespace distsched
