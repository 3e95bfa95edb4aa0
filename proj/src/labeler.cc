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

#include <algorithm>
#include <cmath>
#include <string>

#include "distsched/error.h"

namespace distsched {

namespace {

double Mean(const std::vector<UsageSample>& samples) {
  double sum = 0.0;
  for (const auto& s : samples) sum += s.value;
  return sum / static_cast<double>(samples.size());
}

}  // namespace

void ValidateConfig(const LabelerConfig& config) {
  auto fraction = [](double v) { return v > 0.0 && v < 1.0; };
  if (!fraction(config.low_cutoff) || !fraction(config.high_cutoff)) {
    throw Error(ErrorCode::kInvalidArgument,
                "magnitude cutoffs must lie in (0, 1)");
  }
  if (!(config.low_cutoff < config.high_cutoff)) {
    throw Error(ErrorCode::kInvalidArgument,
                "low_cutoff must be below high_cutoff");
  }
  if (!(config.cv_always_max >= 0.0) || !(config.slope_gradual_min >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "cv_always_max and slope_gradual_min must be non-negative");
  }
}

void ValidateSeries(const UsageSeries& series) {
  if (series.samples.size() < 2) {
    throw Error(ErrorCode::kInsufficientData,
                "at least 2 samples are required, got " +
                    std::to_string(series.samples.size()));
  }
  if (!(series.capacity > 0.0) || !std::isfinite(series.capacity)) {
    throw Error(ErrorCode::kInvalidArgument, "capacity must be positive");
  }
  for (size_t i = 0; i < series.samples.size(); ++i) {
    const auto& s = series.samples[i];
    if (!(s.value >= 0.0) || !std::isfinite(s.value)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "sample " + std::to_string(i) + " has a negative value");
    }
    if (i > 0 && s.time < series.samples[i - 1].time) {
      throw Error(ErrorCode::kInvalidArgument,
                  "sample " + std::to_string(i) + " goes back in time");
    }
  }
}

Magnitude ClassifyMagnitude(const UsageSeries& series,
                            const LabelerConfig& config) {
  ValidateConfig(config);
  ValidateSeries(series);
  double level = 0.0;
  if (config.magnitude_mode == MagnitudeMode::kMean) {
    level = Mean(series.samples);
  } else {
    for (const auto& s : series.samples) level = std::max(level, s.value);
  }
  double u = level / series.capacity;
  if (u < config.low_cutoff) return Magnitude::kLow;
  if (u < config.high_cutoff) return Magnitude::kMedium;
  return Magnitude::kHigh;
}

double CoefficientOfVariation(const UsageSeries& series) {
  ValidateSeries(series);
  double mean = Mean(series.samples);
  if (mean <= 0.0) {
    throw Error(ErrorCode::kUnclassifiable,
                "all-zero usage series has no pattern");
  }
  double ss = 0.0;
  for (const auto& s : series.samples) ss += (s.value - mean) * (s.value - mean);
  return std::sqrt(ss / static_cast<double>(series.samples.size())) / mean;
}

double NormalizedTrendSlope(const UsageSeries& series) {
  ValidateSeries(series);
  const auto& samples = series.samples;
  const size_t n = samples.size();
  std::vector<double> t(n);
  auto span = samples.back().time - samples.front().time;
  for (size_t i = 0; i < n; ++i) {
    if (span.count() > 0) {
      t[i] = static_cast<double>((samples[i].time - samples.front().time).count()) /
             static_cast<double>(span.count());
    } else {
      t[i] = static_cast<double>(i) / static_cast<double>(n - 1);
    }
  }
  double t_mean = 0.0, y_mean = 0.0;
  for (size_t i = 0; i < n; ++i) {
    t_mean += t[i];
    y_mean += samples[i].value / series.capacity;
  }
  t_mean /= static_cast<double>(n);
  y_mean /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double dt = t[i] - t_mean;
    sxy += dt * (samples[i].value / series.capacity - y_mean);
    sxx += dt * dt;
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

Pattern ClassifyPattern(const UsageSeries& series,
                        const LabelerConfig& config) {
  ValidateConfig(config);
  if (CoefficientOfVariation(series) <= config.cv_always_max) {
    return Pattern::kAlways;
  }
  if (std::abs(NormalizedTrendSlope(series)) >= config.slope_gradual_min) {
    return Pattern::kGradual;
  }
  return Pattern::kSpike;
}

std::vector<UsageLabel> DeriveLabels(
    const std::map<ResourceKind, UsageSeries>& usage,
    const LabelerConfig& config) {
  ValidateConfig(config);
  std::vector<UsageLabel> labels;
  for (const auto& [resource, series] : usage) {
    try {
      if (series.resource != resource) {
        throw Error(ErrorCode::kInvalidArgument,
                    "series is keyed under a different resource");
      }
      labels.push_back({resource, ClassifyMagnitude(series, config),
                        ClassifyPattern(series, config)});
    } catch (const Error& e) {
      throw Error(e.code(), std::string(ToString(resource)) + ": " + e.what());
    }
  }
  return labels;
}

}  // namespace distsched
