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

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace distsched {

enum class ResourceKind { kCpu, kMemory, kNetwork, kStorage };
enum class Magnitude { kLow, kMedium, kHigh };
enum class Pattern { kAlways, kSpike, kGradual };
enum class ScopeLevel { kCluster, kNamespace, kApplication };

inline constexpr std::array<ResourceKind, 4> kAllResources = {
    ResourceKind::kCpu, ResourceKind::kMemory, ResourceKind::kNetwork,
    ResourceKind::kStorage};
inline constexpr std::array<Magnitude, 3> kAllMagnitudes = {
    Magnitude::kLow, Magnitude::kMedium, Magnitude::kHigh};
inline constexpr std::array<Pattern, 3> kAllPatterns = {
    Pattern::kAlways, Pattern::kSpike, Pattern::kGradual};
inline constexpr std::array<ScopeLevel, 3> kAllScopes = {
    ScopeLevel::kCluster, ScopeLevel::kNamespace, ScopeLevel::kApplication};

std::string_view ToString(ResourceKind r);
std::string_view ToString(Magnitude m);
std::string_view ToString(Pattern p);
std::string_view ToString(ScopeLevel s);

// Token parsers throw Error(kParse) naming the token.
ResourceKind ParseResourceKind(std::string_view token);
Magnitude ParseMagnitude(std::string_view token);
Pattern ParsePattern(std::string_view token);
ScopeLevel ParseScopeLevel(std::string_view token);

// One (resource, magnitude, pattern) triple, rendered "cpu-low-spike".
struct UsageLabel {
  ResourceKind resource = ResourceKind::kCpu;
  Magnitude magnitude = Magnitude::kLow;
  Pattern pattern = Pattern::kAlways;

  std::string ToString() const;

  friend auto operator<=>(const UsageLabel&, const UsageLabel&) = default;
  friend bool operator==(const UsageLabel&, const UsageLabel&) = default;
};

UsageLabel ParseLabel(std::string_view text);

// All 36 labels of the taxonomy, resource-major.
std::vector<UsageLabel> AllLabels();

// Lowercase alphanumerics with internal hyphens, at most 63 characters.
bool IsValidName(std::string_view name);

// A usage label with the scope suffix of the pod that carries it. The
// application suffix is only ever present together with a namespace.
class ScopedLabel {
 public:
  static ScopedLabel Cluster(UsageLabel base);
  static ScopedLabel Namespaced(UsageLabel base, std::string ns);
  static ScopedLabel Application(UsageLabel base, std::string ns,
                                 std::string app);

  const UsageLabel& base() const { return base_; }
  const std::optional<std::string>& ns() const { return namespace_; }
  const std::optional<std::string>& application() const {
    return application_;
  }
  ScopeLevel level() const;

  std::string ToString() const;

  friend bool operator==(const ScopedLabel&, const ScopedLabel&) = default;

 private:
  ScopedLabel(UsageLabel base, std::optional<std::string> ns,
              std::optional<std::string> app);

  UsageLabel base_;
  std::optional<std::string> namespace_;
  std::optional<std::string> application_;
};

// Inverse of ScopedLabel::ToString. Hyphenated names make the application
// split ambiguous, so application scope needs the namespace up front.
ScopedLabel ParseScopedLabel(std::string_view text, ScopeLevel level,
                             std::string_view known_namespace = {});

struct PodSpec {
  std::string id;
  std::string ns = "default";
  std::string application;
  ScopeLevel scope = ScopeLevel::kCluster;
  // Sorted by resource, at most one per resource kind.
  std::vector<UsageLabel> labels;
  // Whether the rebalancer may relocate this pod.
  bool movable = true;

  friend bool operator==(const PodSpec&, const PodSpec&) = default;
};

// Checks id, names, and the one-label-per-resource rule; sorts labels.
// Throws Error(kValidation).
PodSpec NormalizePod(PodSpec pod);

// Scopes `base` per pod.scope. Throws kInvalidArgument when the pod does
// not carry `base`.
ScopedLabel MakeScopedLabel(const PodSpec& pod, const UsageLabel& base);

// Rendered scoped labels of every label the pod carries, in label order.
std::vector<std::string> RenderedScopedLabels(const PodSpec& pod);

struct Node {
  std::string id;
  std::optional<int64_t> capacity;  // max pods; unset means unlimited

  friend bool operator==(const Node&, const Node&) = default;
};

// Snapshot of nodes, pods and the pod -> node assignment. Nodes are kept in
// canonical (lexicographic id) order; every mutator validates and throws
// Error(kValidation) without changing the state on failure.
class ClusterState {
 public:
  ClusterState() = default;

  static ClusterState Create(std::vector<Node> nodes,
                             std::vector<PodSpec> pods,
                             const std::map<std::string, std::string>& assignment);

  void AddNode(Node node);
  void AddPod(PodSpec pod);
  void RemovePod(const std::string& pod_id);
  void Assign(const std::string& pod_id, const std::string& node_id);
  void Unassign(const std::string& pod_id);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::map<std::string, PodSpec>& pods() const { return pods_; }
  const std::map<std::string, std::string>& assignment() const {
    return assignment_;
  }

  std::optional<size_t> NodeIndex(std::string_view node_id) const;
  const PodSpec* FindPod(std::string_view pod_id) const;
  std::optional<std::string> NodeOf(std::string_view pod_id) const;
  // Number of pods assigned to nodes()[index].
  int64_t Load(size_t index) const { return load_[index]; }
  bool HasRoom(size_t index) const;

  // FNV-1a over a canonical rendering; changes whenever any node, pod or
  // assignment changes.
  uint64_t Fingerprint() const;

  friend bool operator==(const ClusterState& a, const ClusterState& b) {
    return a.nodes_ == b.nodes_ && a.pods_ == b.pods_ &&
           a.assignment_ == b.assignment_;
  }

 private:
  std::vector<Node> nodes_;
  std::map<std::string, PodSpec> pods_;
  std::map<std::string, std::string> assignment_;
  std::vector<int64_t> load_;
};

std::string FingerprintHex(uint64_t fingerprint);

}  // namespace distsched
