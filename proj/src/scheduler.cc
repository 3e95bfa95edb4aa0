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

#include "distsched/scheduler.h"

#include <cmath>

#include "distsched/error.h"

namespace distsched {

namespace {

PodSpec CheckSchedulable(const ClusterState& state, const PodSpec& input) {
  PodSpec pod = NormalizePod(input);
  if (pod.labels.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "pod '" + pod.id +
                    "' carries no usage labels; labels must be applied "
                    "before the pod is scheduled");
  }
  if (state.NodeOf(pod.id)) {
    throw Error(ErrorCode::kInvalidArgument,
                "pod '" + pod.id + "' is already assigned");
  }
  if (const PodSpec* known = state.FindPod(pod.id); known && !(*known == pod)) {
    throw Error(ErrorCode::kInvalidArgument,
                "pod '" + pod.id + "' differs from the pod of the same id in "
                "the cluster");
  }
  return pod;
}

NodeScore ScoreWithIndex(const ClusterState& state, LabelCountIndex& index,
                         const std::vector<std::string>& labels,
                         size_t node) {
  NodeScore score;
  score.node_id = state.nodes()[node].id;
  if (!state.HasRoom(node)) {
    score.reason = "at capacity (" + std::to_string(state.Load(node)) + "/" +
                   std::to_string(*state.nodes()[node].capacity) + ")";
    return score;
  }
  score.feasible = true;
  index.Shift(labels, node, 1);
  for (const auto& label : labels) {
    double factor = index.Factor(label);
    score.per_label[label] = factor;
    score.aggregate += factor;
  }
  index.Shift(labels, node, -1);
  return score;
}

}  // namespace

NodeScore ScoreNode(const ClusterState& state, const PodSpec& pod,
                    const std::string& node_id,
                    VarianceConvention convention) {
  auto node = state.NodeIndex(node_id);
  if (!node) {
    throw Error(ErrorCode::kInvalidArgument, "unknown node '" + node_id + "'");
  }
  PodSpec checked = CheckSchedulable(state, pod);
  LabelCountIndex index(state, convention);
  return ScoreWithIndex(state, index, RenderedScopedLabels(checked), *node);
}

PlacementDecision Place(const ClusterState& state, const PodSpec& pod,
                        VarianceConvention convention) {
  PlacementDecision decision;
  decision.pod = CheckSchedulable(state, pod);
  decision.convention = convention;
  decision.state_fingerprint = state.Fingerprint();

  LabelCountIndex index(state, convention);
  const auto labels = RenderedScopedLabels(decision.pod);
  std::optional<size_t> best;
  for (size_t node = 0; node < state.nodes().size(); ++node) {
    decision.scores.push_back(ScoreWithIndex(state, index, labels, node));
    const NodeScore& score = decision.scores.back();
    if (!score.feasible) continue;
    if (!best) {
      best = node;
      continue;
    }
    double incumbent = decision.scores[*best].aggregate;
    // Nodes are visited in id order, so an exact tie keeps the earlier id.
    if (score.aggregate < incumbent - kTieTolerance ||
        (std::abs(score.aggregate - incumbent) <= kTieTolerance &&
         state.Load(node) < state.Load(*best))) {
      best = node;
    }
  }
  if (!best) {
    std::string message = "pod '" + decision.pod.id + "' is unschedulable:";
    if (state.nodes().empty()) message += " cluster has no nodes";
    for (const auto& score : decision.scores) {
      message += " " + score.node_id + " " + score.reason + ";";
    }
    throw Error(ErrorCode::kUnschedulable, message);
  }
  decision.chosen_node = state.nodes()[*best].id;
  return decision;
}

ClusterState Apply(const ClusterState& state,
                   const PlacementDecision& decision) {
  if (state.NodeOf(decision.pod_id())) {
    throw Error(ErrorCode::kConflict,
                "pod '" + decision.pod_id() + "' is already assigned");
  }
  if (state.Fingerprint() != decision.state_fingerprint) {
    throw Error(ErrorCode::kConflict,
                "decision for pod '" + decision.pod_id() +
                    "' was computed against a different cluster state");
  }
  ClusterState next = state;
  try {
    if (!next.FindPod(decision.pod_id())) next.AddPod(decision.pod);
    next.Assign(decision.pod_id(), decision.chosen_node);
  } catch (const Error& e) {
    throw Error(ErrorCode::kConflict, e.what());
  }
  return next;
}

}  // namespace distsched
