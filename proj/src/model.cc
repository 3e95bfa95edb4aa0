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

#include "distsched/model.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "distsched/error.h"

namespace distsched {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kValidation: return "validation";
    case ErrorCode::kInsufficientData: return "insufficient-data";
    case ErrorCode::kUnclassifiable: return "unclassifiable";
    case ErrorCode::kUnschedulable: return "unschedulable";
    case ErrorCode::kConflict: return "conflict";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

namespace {

template <typename Enum, size_t N>
Enum ParseToken(std::string_view token, const std::array<Enum, N>& values,
                const char* what) {
  for (Enum v : values) {
    if (ToString(v) == token) return v;
  }
  throw Error(ErrorCode::kParse, "unknown " + std::string(what) + " '" +
                                     std::string(token) + "'");
}

std::vector<std::string_view> SplitHyphen(std::string_view text) {
  std::vector<std::string_view> parts;
  size_t start = 0;
  while (true) {
    size_t pos = text.find('-', start);
    if (pos == std::string_view::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

[[noreturn]] void Invalid(const std::string& message) {
  throw Error(ErrorCode::kValidation, message);
}

}  // namespace

std::string_view ToString(ResourceKind r) {
  switch (r) {
    case ResourceKind::kCpu: return "cpu";
    case ResourceKind::kMemory: return "memory";
    case ResourceKind::kNetwork: return "network";
    case ResourceKind::kStorage: return "storage";
  }
  return "?";
}

std::string_view ToString(Magnitude m) {
  switch (m) {
    case Magnitude::kLow: return "low";
    case Magnitude::kMedium: return "medium";
    case Magnitude::kHigh: return "high";
  }
  return "?";
}

std::string_view ToString(Pattern p) {
  switch (p) {
    case Pattern::kAlways: return "always";
    case Pattern::kSpike: return "spike";
    case Pattern::kGradual: return "gradual";
  }
  return "?";
}

std::string_view ToString(ScopeLevel s) {
  switch (s) {
    case ScopeLevel::kCluster: return "cluster";
    case ScopeLevel::kNamespace: return "namespace";
    case ScopeLevel::kApplication: return "application";
  }
  return "?";
}

ResourceKind ParseResourceKind(std::string_view token) {
  return ParseToken(token, kAllResources, "resource");
}
Magnitude ParseMagnitude(std::string_view token) {
  return ParseToken(token, kAllMagnitudes, "magnitude");
}
Pattern ParsePattern(std::string_view token) {
  return ParseToken(token, kAllPatterns, "pattern");
}
ScopeLevel ParseScopeLevel(std::string_view token) {
  return ParseToken(token, kAllScopes, "scope");
}

std::string UsageLabel::ToString() const {
  std::string out(distsched::ToString(resource));
  out += '-';
  out += distsched::ToString(magnitude);
  out += '-';
  out += distsched::ToString(pattern);
  return out;
}

UsageLabel ParseLabel(std::string_view text) {
  if (text.empty()) throw Error(ErrorCode::kParse, "empty label");
  auto parts = SplitHyphen(text);
  if (parts.size() != 3) {
    throw Error(ErrorCode::kParse,
                "label '" + std::string(text) +
                    "' is not of the form <resource>-<magnitude>-<pattern>");
  }
  return UsageLabel{ParseResourceKind(parts[0]), ParseMagnitude(parts[1]),
                    ParsePattern(parts[2])};
}

std::vector<UsageLabel> AllLabels() {
  std::vector<UsageLabel> out;
  for (auto r : kAllResources)
    for (auto p : kAllPatterns)
      for (auto m : kAllMagnitudes) out.push_back({r, m, p});
  return out;
}

bool IsValidName(std::string_view name) {
  if (name.empty() || name.size() > 63) return false;
  auto ok = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
  };
  if (!ok(name.front()) || !ok(name.back())) return false;
  return std::all_of(name.begin(), name.end(),
                     [&](char c) { return ok(c) || c == '-'; });
}

ScopedLabel::ScopedLabel(UsageLabel base, std::optional<std::string> ns,
                         std::optional<std::string> app)
    : base_(base), namespace_(std::move(ns)), application_(std::move(app)) {}

ScopedLabel ScopedLabel::Cluster(UsageLabel base) {
  return ScopedLabel(base, std::nullopt, std::nullopt);
}

ScopedLabel ScopedLabel::Namespaced(UsageLabel base, std::string ns) {
  if (!IsValidName(ns)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid namespace '" + ns + "'");
  }
  return ScopedLabel(base, std::move(ns), std::nullopt);
}

ScopedLabel ScopedLabel::Application(UsageLabel base, std::string ns,
                                     std::string app) {
  if (!IsValidName(ns)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid namespace '" + ns + "'");
  }
  if (!IsValidName(app)) {
    throw Error(ErrorCode::kInvalidArgument,
                "invalid application '" + app + "'");
  }
  return ScopedLabel(base, std::move(ns), std::move(app));
}

ScopeLevel ScopedLabel::level() const {
  if (application_) return ScopeLevel::kApplication;
  if (namespace_) return ScopeLevel::kNamespace;
  return ScopeLevel::kCluster;
}

std::string ScopedLabel::ToString() const {
  std::string out = base_.ToString();
  if (namespace_) out += "-" + *namespace_;
  if (application_) out += "-" + *application_;
  return out;
}

ScopedLabel ParseScopedLabel(std::string_view text, ScopeLevel level,
                             std::string_view known_namespace) {
  // The base occupies exactly the first three hyphen-separated tokens.
  size_t cut = 0;
  for (int i = 0; i < 3 && cut != std::string_view::npos; ++i) {
    cut = text.find('-', i == 0 ? 0 : cut + 1);
  }
  UsageLabel base = ParseLabel(text.substr(0, cut));
  std::string_view rest =
      cut == std::string_view::npos ? std::string_view{} : text.substr(cut + 1);
  switch (level) {
    case ScopeLevel::kCluster:
      if (cut != std::string_view::npos) {
        throw Error(ErrorCode::kParse, "unexpected scope suffix in '" +
                                           std::string(text) + "'");
      }
      return ScopedLabel::Cluster(base);
    case ScopeLevel::kNamespace:
      if (!IsValidName(rest)) {
        throw Error(ErrorCode::kParse,
                    "bad namespace suffix in '" + std::string(text) + "'");
      }
      return ScopedLabel::Namespaced(base, std::string(rest));
    case ScopeLevel::kApplication: {
      if (!IsValidName(known_namespace) ||
          rest.size() <= known_namespace.size() + 1 ||
          rest.substr(0, known_namespace.size()) != known_namespace ||
          rest[known_namespace.size()] != '-') {
        throw Error(ErrorCode::kParse, "'" + std::string(text) +
                                           "' does not carry namespace '" +
                                           std::string(known_namespace) + "'");
      }
      std::string_view app = rest.substr(known_namespace.size() + 1);
      if (!IsValidName(app)) {
        throw Error(ErrorCode::kParse,
                    "bad application suffix in '" + std::string(text) + "'");
      }
      return ScopedLabel::Application(base, std::string(known_namespace),
                                      std::string(app));
    }
  }
  throw Error(ErrorCode::kParse, "unknown scope level");
}

PodSpec NormalizePod(PodSpec pod) {
  if (pod.id.empty()) Invalid("pod with empty id");
  if (!IsValidName(pod.ns)) {
    Invalid("pod '" + pod.id + "': invalid namespace '" + pod.ns + "'");
  }
  if (pod.application.empty()) pod.application = pod.id;
  if (!IsValidName(pod.application)) {
    Invalid("pod '" + pod.id + "': invalid application '" + pod.application +
            "'");
  }
  std::sort(pod.labels.begin(), pod.labels.end());
  for (size_t i = 1; i < pod.labels.size(); ++i) {
    if (pod.labels[i].resource == pod.labels[i - 1].resource) {
      Invalid("pod '" + pod.id + "': more than one " +
              std::string(ToString(pod.labels[i].resource)) + " label");
    }
  }
  return pod;
}

ScopedLabel MakeScopedLabel(const PodSpec& pod, const UsageLabel& base) {
  if (std::find(pod.labels.begin(), pod.labels.end(), base) ==
      pod.labels.end()) {
    throw Error(ErrorCode::kInvalidArgument, "pod '" + pod.id +
                                                 "' does not carry label '" +
                                                 base.ToString() + "'");
  }
  switch (pod.scope) {
    case ScopeLevel::kCluster: return ScopedLabel::Cluster(base);
    case ScopeLevel::kNamespace: return ScopedLabel::Namespaced(base, pod.ns);
    case ScopeLevel::kApplication:
      return ScopedLabel::Application(base, pod.ns, pod.application);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown scope level");
}

std::vector<std::string> RenderedScopedLabels(const PodSpec& pod) {
  std::vector<std::string> out;
  out.reserve(pod.labels.size());
  for (const auto& label : pod.labels) {
    out.push_back(MakeScopedLabel(pod, label).ToString());
  }
  return out;
}

ClusterState ClusterState::Create(
    std::vector<Node> nodes, std::vector<PodSpec> pods,
    const std::map<std::string, std::string>& assignment) {
  ClusterState state;
  for (auto& node : nodes) state.AddNode(std::move(node));
  for (auto& pod : pods) state.AddPod(std::move(pod));
  for (const auto& [pod_id, node_id] : assignment) {
    state.Assign(pod_id, node_id);
  }
  return state;
}

void ClusterState::AddNode(Node node) {
  if (node.id.empty()) Invalid("node with empty id");
  if (node.capacity && *node.capacity < 0) {
    Invalid("node '" + node.id + "': negative capacity");
  }
  auto it = std::lower_bound(
      nodes_.begin(), nodes_.end(), node.id,
      [](const Node& n, const std::string& id) { return n.id < id; });
  if (it != nodes_.end() && it->id == node.id) {
    Invalid("duplicate node id '" + node.id + "'");
  }
  size_t index = it - nodes_.begin();
  nodes_.insert(it, std::move(node));
  load_.insert(load_.begin() + index, 0);
}

void ClusterState::AddPod(PodSpec pod) {
  pod = NormalizePod(std::move(pod));
  if (pods_.count(pod.id)) Invalid("duplicate pod id '" + pod.id + "'");
  std::string id = pod.id;
  pods_.emplace(std::move(id), std::move(pod));
}

void ClusterState::RemovePod(const std::string& pod_id) {
  if (!pods_.count(pod_id)) Invalid("unknown pod '" + pod_id + "'");
  if (assignment_.count(pod_id)) Unassign(pod_id);
  pods_.erase(pod_id);
}

void ClusterState::Assign(const std::string& pod_id,
                          const std::string& node_id) {
  if (!pods_.count(pod_id)) {
    Invalid("assignment of unknown pod '" + pod_id + "'");
  }
  auto index = NodeIndex(node_id);
  if (!index) {
    Invalid("pod '" + pod_id + "' assigned to unknown node '" + node_id + "'");
  }
  if (assignment_.count(pod_id)) {
    Invalid("pod '" + pod_id + "' is already assigned to '" +
            assignment_.at(pod_id) + "'");
  }
  if (!HasRoom(*index)) {
    Invalid("node '" + node_id + "' would exceed its capacity of " +
            std::to_string(*nodes_[*index].capacity));
  }
  assignment_.emplace(pod_id, node_id);
  ++load_[*index];
}

void ClusterState::Unassign(const std::string& pod_id) {
  auto it = assignment_.find(pod_id);
  if (it == assignment_.end()) Invalid("pod '" + pod_id + "' is not assigned");
  --load_[*NodeIndex(it->second)];
  assignment_.erase(it);
}

std::optional<size_t> ClusterState::NodeIndex(std::string_view node_id) const {
  auto it = std::lower_bound(
      nodes_.begin(), nodes_.end(), node_id,
      [](const Node& n, std::string_view id) { return n.id < id; });
  if (it == nodes_.end() || it->id != node_id) return std::nullopt;
  return static_cast<size_t>(it - nodes_.begin());
}

const PodSpec* ClusterState::FindPod(std::string_view pod_id) const {
  auto it = pods_.find(std::string(pod_id));
  return it == pods_.end() ? nullptr : &it->second;
}

std::optional<std::string> ClusterState::NodeOf(
    std::string_view pod_id) const {
  auto it = assignment_.find(std::string(pod_id));
  if (it == assignment_.end()) return std::nullopt;
  return it->second;
}

bool ClusterState::HasRoom(size_t index) const {
  const auto& cap = nodes_[index].capacity;
  return !cap || load_[index] < *cap;
}

uint64_t ClusterState::Fingerprint() const {
  std::ostringstream canon;
  for (const auto& node : nodes_) {
    canon << "N" << node.id << '\x1f'
          << (node.capacity ? std::to_string(*node.capacity) : "-") << '\x1e';
  }
  for (const auto& [id, pod] : pods_) {
    canon << "P" << id << '\x1f' << pod.ns << '\x1f' << pod.application
          << '\x1f' << ToString(pod.scope) << '\x1f' << pod.movable;
    for (const auto& label : pod.labels) canon << '\x1f' << label.ToString();
    canon << '\x1e';
  }
  for (const auto& [pod, node] : assignment_) {
    canon << "A" << pod << '\x1f' << node << '\x1e';
  }
  uint64_t hash = 14695981039346656037ULL;
  for (unsigned char c : canon.str()) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string FingerprintHex(uint64_t fingerprint) {
  static const char* kDigits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = kDigits[fingerprint & 0xf];
    fingerprint >>= 4;
  }
  return out;
}

}  // namespace distsched
