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
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "distsched/model.h"

namespace distsched {

// Divisor of the variance: n (population) or n - 1 (sample).
enum class VarianceConvention { kPopulation, kSample };

std::string_view ToString(VarianceConvention convention);
VarianceConvention ParseConvention(std::string_view text);

// Arithmetic-mean-centred variance. Throws Error(kInvalidArgument) on an
// empty input or a single value under the sample convention.
double Variance(std::span<const double> values, VarianceConvention convention);

// Variance of integer counts computed from exact integer moments,
// (n * sum(x^2) - sum(x)^2) / (n * divisor). Equal vectors up to permutation
// give bit-identical results, which keeps tie-breaking exact.
double CountVariance(std::span<const int64_t> counts,
                     VarianceConvention convention);

struct LabelCountVector {
  std::string scoped_label;
  std::vector<int64_t> counts;  // canonical node order
};

LabelCountVector CountVector(const ClusterState& state,
                             const ScopedLabel& scoped);

double DistributednessFactor(const ClusterState& state,
                             const ScopedLabel& scoped,
                             VarianceConvention convention);

struct ReportEntry {
  std::vector<int64_t> counts;
  double factor = 0.0;
};

struct DistributednessReport {
  VarianceConvention convention = VarianceConvention::kSample;
  // Keyed by rendered scoped label, so iteration is lexicographic.
  std::map<std::string, ReportEntry> labels;
};

DistributednessReport ClusterReport(const ClusterState& state,
                                    VarianceConvention convention);

// Per-label count vectors of the assigned pods, kept up to date as pods are
// added to and removed from nodes. The scheduler and rebalancer evaluate
// hypothetical placements against it instead of copying the state.
class LabelCountIndex {
 public:
  LabelCountIndex(const ClusterState& state, VarianceConvention convention);

  // Adds `delta` (+1 or -1) to each label's count on node `node`.
  void Shift(std::span<const std::string> labels, size_t node, int64_t delta);

  // Count vector for `label`; all zeros when no assigned pod carries it.
  std::vector<int64_t> Counts(const std::string& label) const;
  double Factor(const std::string& label) const;
  // Sum of factors over every label with at least one assigned pod, added
  // in lexicographic label order.
  double Total() const;

  size_t node_count() const { return node_count_; }
  VarianceConvention convention() const { return convention_; }

 private:
  struct Entry {
    std::vector<int64_t> counts;
    int64_t sum = 0;
  };

  size_t node_count_;
  VarianceConvention convention_;
  std::map<std::string, Entry, std::less<>> entries_;
};

}  // namespace distsched
