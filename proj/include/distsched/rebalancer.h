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
#include <string>
#include <vector>

#include "distsched/distributedness.h"
#include "distsched/model.h"

namespace distsched {

struct RebalanceConfig {
  int64_t max_moves = 1000;
  int64_t max_passes = 100;
  // A relocation is accepted only if it lowers the total by more than this.
  double min_improvement = 1e-9;
};

void ValidateConfig(const RebalanceConfig& config);

struct Move {
  std::string pod_id;
  std::string from_node;
  std::string to_node;
  double total_before = 0.0;
  double total_after = 0.0;
};

struct RebalancePlan {
  std::vector<Move> moves;
  double initial_total = 0.0;
  double final_total = 0.0;
};

// Sum of the distributedness factor of every scoped label carried by at
// least one assigned pod; 0 for a cluster without assigned pods.
double TotalDistributedness(const ClusterState& state,
                            VarianceConvention convention);

// Greedy single-pod relocation. Each pass visits the movable assigned pods
// in order of how far above the mean their label counts sit on their
// current node (ties by pod id), and moves each to the feasible node giving
// the lowest total, if that beats the current total by more than
// min_improvement. Stops after a pass with no move or at either limit.
// The input state is never modified; see ApplyPlan.
RebalancePlan Rebalance(const ClusterState& state,
                        const RebalanceConfig& config,
                        VarianceConvention convention);

// Replays the moves in order. Throws Error(kConflict) if a move does not
// match the state it is applied to.
ClusterState ApplyPlan(const ClusterState& state, const RebalancePlan& plan);

}  // namespace distsched
