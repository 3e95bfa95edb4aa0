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

#include "distsched/rebalancer.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "distsched/error.h"
#include "distsched/scheduler.h"

namespace distsched {

namespace {

struct Visit {
  double contribution;
  std::string pod_id;
};

// First-order effect of removing the pod from its node: how far each of its
// labels' counts on that node sits above the label mean.
double Contribution(const LabelCountIndex& index,
                    const std::vector<std::string>& labels, size_t node) {
  double total = 0.0;
  for (const auto& label : labels) {
    auto counts = index.Counts(label);
    double mean = 0.0;
    for (int64_t c : counts) mean += static_cast<double>(c);
    mean /= static_cast<double>(counts.size());
    total += static_cast<double>(counts[node]) - mean;
  }
  return total;
}

}  // namespace

void ValidateConfig(const RebalanceConfig& config) {
  if (config.max_moves <= 0 || config.max_passes <= 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "max_moves and max_passes must be positive");
  }
  if (!(config.min_improvement >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "min_improvement must be non-negative");
  }
}

double TotalDistributedness(const ClusterState& state,
                            VarianceConvention convention) {
  return LabelCountIndex(state, convention).Total();
}

RebalancePlan Rebalance(const ClusterState& state,
                        const RebalanceConfig& config,
                        VarianceConvention convention) {
  ValidateConfig(config);
  ClusterState work = state;
  LabelCountIndex index(work, convention);
  std::map<std::string, std::vector<std::string>> labels_of;
  for (const auto& [pod_id, node_id] : work.assignment()) {
    labels_of[pod_id] = RenderedScopedLabels(*work.FindPod(pod_id));
  }

  RebalancePlan plan;
  plan.initial_total = index.Total();
  double current_total = plan.initial_total;
  const auto moves_left = [&] {
    return static_cast<int64_t>(plan.moves.size()) < config.max_moves;
  };

  for (int64_t pass = 0; pass < config.max_passes && moves_left(); ++pass) {
    std::vector<Visit> order;
    for (const auto& [pod_id, node_id] : work.assignment()) {
      if (!work.FindPod(pod_id)->movable) continue;
      order.push_back({Contribution(index, labels_of[pod_id],
                                    *work.NodeIndex(node_id)),
                       pod_id});
    }
    std::sort(order.begin(), order.end(), [](const Visit& a, const Visit& b) {
      if (a.contribution != b.contribution) {
        return a.contribution > b.contribution;
      }
      return a.pod_id < b.pod_id;
    });

    bool moved = false;
    for (const auto& visit : order) {
      if (!moves_left()) break;
      const auto& labels = labels_of[visit.pod_id];
      const size_t from = *work.NodeIndex(*work.NodeOf(visit.pod_id));
      index.Shift(labels, from, -1);

      size_t best = from;
      double best_total = 0.0;
      int64_t best_load = 0;
      bool have_best = false;
      for (size_t node = 0; node < work.nodes().size(); ++node) {
        if (node != from && !work.HasRoom(node)) continue;
        int64_t load = work.Load(node) - (node == from ? 1 : 0);
        index.Shift(labels, node, 1);
        double total = index.Total();
        index.Shift(labels, node, -1);
        if (!have_best || total < best_total - kTieTolerance ||
            (std::abs(total - best_total) <= kTieTolerance &&
             load < best_load)) {
          best = node;
          best_total = total;
          best_load = load;
          have_best = true;
        }
      }

      if (best != from && current_total - best_total > config.min_improvement) {
        index.Shift(labels, best, 1);
        work.Unassign(visit.pod_id);
        work.Assign(visit.pod_id, work.nodes()[best].id);
        plan.moves.push_back({visit.pod_id, work.nodes()[from].id,
                              work.nodes()[best].id, current_total,
                              best_total});
        current_total = best_total;
        moved = true;
      } else {
        index.Shift(labels, from, 1);
      }
    }
    if (!moved) break;
  }
  plan.final_total = current_total;
  return plan;
}

ClusterState ApplyPlan(const ClusterState& state, const RebalancePlan& plan) {
  ClusterState next = state;
  for (const auto& move : plan.moves) {
    auto at = next.NodeOf(move.pod_id);
    if (!at || *at != move.from_node) {
      throw Error(ErrorCode::kConflict, "pod '" + move.pod_id +
                                            "' is not on node '" +
                                            move.from_node + "'");
    }
    try {
      next.Unassign(move.pod_id);
      next.Assign(move.pod_id, move.to_node);
    } catch (const Error& e) {
      throw Error(ErrorCode::kConflict, e.what());
    }
  }
  return next;
}

}  // namespace distsched
