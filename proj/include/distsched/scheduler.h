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
#include <string>
#include <vector>

#include "distsched/distributedness.h"
#include "distsched/model.h"

namespace distsched {

// Aggregates closer than this are treated as equal and fall through to the
// tie-break rules.
inline constexpr double kTieTolerance = 1e-9;

struct NodeScore {
  std::string node_id;
  bool feasible = false;
  // Sum of per_label; meaningful only when feasible.
  double aggregate = 0.0;
  // Post-placement factor of each of the pod's scoped labels.
  std::map<std::string, double> per_label;
  // Why the node cannot take the pod; empty when feasible.
  std::string reason;
};

struct PlacementDecision {
  PodSpec pod;
  std::string chosen_node;
  std::vector<NodeScore> scores;  // canonical node order
  VarianceConvention convention = VarianceConvention::kSample;
  // Fingerprint of the state the decision was computed against.
  uint64_t state_fingerprint = 0;

  const std::string& pod_id() const { return pod.id; }
};

// Scores a hypothetical placement of `pod` on `node_id` without touching
// `state`. Throws Error(kInvalidArgument) for an unknown node or a pod that
// is already assigned.
NodeScore ScoreNode(const ClusterState& state, const PodSpec& pod,
                    const std::string& node_id, VarianceConvention convention);

// Picks the feasible node with the lowest aggregate post-placement factor.
// Ties go to the node with the fewest assigned pods, then the smallest id.
// Throws Error(kUnschedulable) when no node is feasible.
PlacementDecision Place(const ClusterState& state, const PodSpec& pod,
                        VarianceConvention convention);

// Returns a copy of `state` with the decision's pod assigned. Throws
// Error(kConflict) when `state` is not the state the decision was made for.
ClusterState Apply(const ClusterState& state,
                   const PlacementDecision& decision);

}  // namespace distsched
