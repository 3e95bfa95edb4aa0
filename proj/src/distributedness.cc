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

#include "distsched/error.h"

namespace distsched {

namespace {

void CheckSize(size_t n, VarianceConvention convention) {
  if (n == 0) {
    throw Error(ErrorCode::kInvalidArgument, "variance of an empty series");
  }
  if (convention == VarianceConvention::kSample && n < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "sample variance needs at least 2 values");
  }
}

double Divisor(size_t n, VarianceConvention convention) {
  return convention == VarianceConvention::kSample
             ? static_cast<double>(n - 1)
             : static_cast<double>(n);
}

}  // namespace

std::string_view ToString(VarianceConvention convention) {
  return convention == VarianceConvention::kSample ? "sample" : "population";
}

VarianceConvention ParseConvention(std::string_view text) {
  if (text == "sample") return VarianceConvention::kSample;
  if (text == "population") return VarianceConvention::kPopulation;
  throw Error(ErrorCode::kParse,
              "unknown variance convention '" + std::string(text) + "'");
}

double Variance(std::span<const double> values,
                VarianceConvention convention) {
  CheckSize(values.size(), convention);
  // Deviations are taken from the first value so a constant series yields
  // exactly zero even when its mean is not representable.
  const double pivot = values.front();
  double mean = 0.0;
  for (double v : values) mean += v - pivot;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) {
    double d = (v - pivot) - mean;
    ss += d * d;
  }
  return ss / Divisor(values.size(), convention);
}

double CountVariance(std::span<const int64_t> counts,
                     VarianceConvention convention) {
  CheckSize(counts.size(), convention);
  const auto n = static_cast<int64_t>(counts.size());
  int64_t sum = 0, sum_sq = 0;
  for (int64_t c : counts) {
    sum += c;
    sum_sq += c * c;
  }
  int64_t numerator = n * sum_sq - sum * sum;
  return static_cast<double>(numerator) /
         (static_cast<double>(n) * Divisor(counts.size(), convention));
}

LabelCountVector CountVector(const ClusterState& state,
                             const ScopedLabel& scoped) {
  LabelCountVector out{scoped.ToString(),
                       std::vector<int64_t>(state.nodes().size(), 0)};
  for (const auto& [pod_id, node_id] : state.assignment()) {
    const PodSpec& pod = *state.FindPod(pod_id);
    for (const auto& rendered : RenderedScopedLabels(pod)) {
      if (rendered == out.scoped_label) {
        ++out.counts[*state.NodeIndex(node_id)];
        break;
      }
    }
  }
  return out;
}

double DistributednessFactor(const ClusterState& state,
                             const ScopedLabel& scoped,
                             VarianceConvention convention) {
  return CountVariance(CountVector(state, scoped).counts, convention);
}

DistributednessReport ClusterReport(const ClusterState& state,
                                    VarianceConvention convention) {
  DistributednessReport report;
  report.convention = convention;
  LabelCountIndex index(state, convention);
  for (const auto& [pod_id, node_id] : state.assignment()) {
    for (const auto& label : RenderedScopedLabels(*state.FindPod(pod_id))) {
      if (report.labels.count(label)) continue;
      ReportEntry entry;
      entry.counts = index.Counts(label);
      entry.factor = index.Factor(label);
      report.labels.emplace(label, std::move(entry));
    }
  }
  return report;
}

LabelCountIndex::LabelCountIndex(const ClusterState& state,
                                 VarianceConvention convention)
    : node_count_(state.nodes().size()), convention_(convention) {
  for (const auto& [pod_id, node_id] : state.assignment()) {
    auto labels = RenderedScopedLabels(*state.FindPod(pod_id));
    Shift(labels, *state.NodeIndex(node_id), 1);
  }
}

void LabelCountIndex::Shift(std::span<const std::string> labels, size_t node,
                            int64_t delta) {
  for (const auto& label : labels) {
    auto it = entries_.find(label);
    if (it == entries_.end()) {
      it = entries_
               .emplace(label, Entry{std::vector<int64_t>(node_count_, 0), 0})
               .first;
    }
    it->second.counts[node] += delta;
    it->second.sum += delta;
    if (it->second.counts[node] < 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "negative count for label '" + label + "'");
    }
  }
}

std::vector<int64_t> LabelCountIndex::Counts(const std::string& label) const {
  auto it = entries_.find(label);
  if (it == entries_.end()) return std::vector<int64_t>(node_count_, 0);
  return it->second.counts;
}

double LabelCountIndex::Factor(const std::string& label) const {
  auto it = entries_.find(label);
  if (it == entries_.end()) {
    return CountVariance(std::vector<int64_t>(node_count_, 0), convention_);
  }
  return CountVariance(it->second.counts, convention_);
}

double LabelCountIndex::Total() const {
  double total = 0.0;
  for (const auto& [label, entry] : entries_) {
    if (entry.sum == 0) continue;
    total += CountVariance(entry.counts, convention_);
  }
  return total;
}

}  // namespace distsched
