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

#include "distsched/io.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "distsched/error.h"

namespace distsched {

namespace {

[[noreturn]] void Bad(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::kParse, where + ": " + what);
}

void CheckKeys(const Json& j, const std::string& where,
               std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) Bad(where, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      Bad(where, "unknown field '" + key + "'");
    }
  }
}

const Json& Required(const Json& j, const std::string& where,
                     const std::string& key) {
  auto it = j.find(key);
  if (it == j.end()) Bad(where, "missing field '" + key + "'");
  return *it;
}

std::string GetString(const Json& j, const std::string& where) {
  if (!j.is_string()) Bad(where, "expected a string");
  return j.get<std::string>();
}

double GetNumber(const Json& j, const std::string& where) {
  if (!j.is_number()) Bad(where, "expected a number");
  return j.get<double>();
}

int64_t GetInteger(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) Bad(where, "expected an integer");
  return j.get<int64_t>();
}

// Rethrows model errors with the field path in front.
template <typename Fn>
auto AtField(const std::string& where, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), where + ": " + e.what());
  }
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int ParseDigits(std::string_view text, size_t pos, size_t count,
                std::string_view whole) {
  int value = 0;
  if (pos + count > text.size()) {
    throw Error(ErrorCode::kParse,
                "truncated timestamp '" + std::string(whole) + "'");
  }
  auto [ptr, ec] =
      std::from_chars(text.data() + pos, text.data() + pos + count, value);
  if (ec != std::errc() || ptr != text.data() + pos + count) {
    throw Error(ErrorCode::kParse,
                "malformed timestamp '" + std::string(whole) + "'");
  }
  return value;
}

std::string FormatDouble(double v) {
  std::ostringstream out;
  out << std::setprecision(6) << v;
  return out.str();
}

}  // namespace

Timestamp ParseIso8601(std::string_view text) {
  using namespace std::chrono;
  auto expect = [&](size_t pos, std::string_view chars) {
    if (pos >= text.size() || chars.find(text[pos]) == std::string_view::npos) {
      throw Error(ErrorCode::kParse,
                  "malformed timestamp '" + std::string(text) + "'");
    }
  };
  int y = ParseDigits(text, 0, 4, text);
  expect(4, "-");
  int mo = ParseDigits(text, 5, 2, text);
  expect(7, "-");
  int d = ParseDigits(text, 8, 2, text);
  expect(10, "Tt ");
  int h = ParseDigits(text, 11, 2, text);
  expect(13, ":");
  int mi = ParseDigits(text, 14, 2, text);
  expect(16, ":");
  int s = ParseDigits(text, 17, 2, text);
  size_t pos = 19;
  int64_t micros = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    int digits = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      if (digits < 6) {
        micros = micros * 10 + (text[pos] - '0');
        ++digits;
      }
      ++pos;
    }
    if (digits == 0) expect(pos, "0123456789");
    for (; digits < 6; ++digits) micros *= 10;
  }
  minutes offset{0};
  if (pos < text.size()) {
    if (text[pos] == 'Z' || text[pos] == 'z') {
      ++pos;
    } else {
      expect(pos, "+-");
      int sign = text[pos] == '-' ? -1 : 1;
      int oh = ParseDigits(text, pos + 1, 2, text);
      expect(pos + 3, ":");
      int om = ParseDigits(text, pos + 4, 2, text);
      offset = minutes(sign * (oh * 60 + om));
      pos += 6;
    }
  }
  if (pos != text.size()) {
    throw Error(ErrorCode::kParse,
                "trailing characters in timestamp '" + std::string(text) + "'");
  }
  year_month_day date{year(y), month(static_cast<unsigned>(mo)),
                      day(static_cast<unsigned>(d))};
  if (!date.ok() || h > 23 || mi > 59 || s > 60) {
    throw Error(ErrorCode::kParse,
                "out-of-range timestamp '" + std::string(text) + "'");
  }
  return sys_days(date) + hours(h) + minutes(mi) + seconds(s) -
         offset + microseconds(micros);
}

std::string FormatIso8601(Timestamp time) {
  using namespace std::chrono;
  auto day_start = floor<days>(time);
  year_month_day date(day_start);
  hh_mm_ss<microseconds> tod(time - day_start);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02d",
                static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()),
                static_cast<unsigned>(date.day()),
                static_cast<int>(tod.hours().count()),
                static_cast<int>(tod.minutes().count()),
                static_cast<int>(tod.seconds().count()));
  std::string out = buf;
  if (auto frac = tod.subseconds().count(); frac != 0) {
    std::snprintf(buf, sizeof(buf), ".%06lld", static_cast<long long>(frac));
    out += buf;
  }
  return out + "Z";
}

Json ParseJson(std::string_view text, const std::string& source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    size_t line = 1, column = 1;
    for (size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw Error(ErrorCode::kParse, source + ":" + std::to_string(line) + ":" +
                                       std::to_string(column) +
                                       ": invalid JSON: " + e.what());
  }
}

Json ReadJsonFile(const std::filesystem::path& path) {
  return ParseJson(ReadTextFile(path), path.string());
}

void WriteTextFile(const std::filesystem::path& path,
                   const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  }
  out << text;
}

PodSpec PodFromJson(const Json& j, const std::string& where) {
  CheckKeys(j, where,
            {"id", "namespace", "application", "scope", "labels", "movable"});
  PodSpec pod;
  pod.id = GetString(Required(j, where, "id"), where + ".id");
  pod.ns = GetString(Required(j, where, "namespace"), where + ".namespace");
  pod.application =
      GetString(Required(j, where, "application"), where + ".application");
  pod.scope = AtField(where + ".scope", [&] {
    return ParseScopeLevel(
        GetString(Required(j, where, "scope"), where + ".scope"));
  });
  const Json& labels = Required(j, where, "labels");
  if (!labels.is_array()) Bad(where + ".labels", "expected an array");
  for (size_t i = 0; i < labels.size(); ++i) {
    std::string at = where + ".labels[" + std::to_string(i) + "]";
    pod.labels.push_back(
        AtField(at, [&] { return ParseLabel(GetString(labels[i], at)); }));
  }
  if (auto it = j.find("movable"); it != j.end()) {
    if (!it->is_boolean()) Bad(where + ".movable", "expected a boolean");
    pod.movable = it->get<bool>();
  }
  return AtField(where, [&] { return NormalizePod(std::move(pod)); });
}

Json PodToJson(const PodSpec& pod) {
  Json labels = Json::array();
  for (const auto& label : pod.labels) labels.push_back(label.ToString());
  Json j = {{"id", pod.id},
            {"namespace", pod.ns},
            {"application", pod.application},
            {"scope", std::string(ToString(pod.scope))},
            {"labels", labels}};
  if (!pod.movable) j["movable"] = false;
  return j;
}

ClusterState ClusterFromJson(const Json& j) {
  CheckKeys(j, "cluster", {"nodes", "pods", "assignment"});
  ClusterState state;
  const Json& nodes = Required(j, "cluster", "nodes");
  if (!nodes.is_array()) Bad("nodes", "expected an array");
  for (size_t i = 0; i < nodes.size(); ++i) {
    std::string at = "nodes[" + std::to_string(i) + "]";
    CheckKeys(nodes[i], at, {"id", "capacity"});
    Node node;
    node.id = GetString(Required(nodes[i], at, "id"), at + ".id");
    if (auto it = nodes[i].find("capacity");
        it != nodes[i].end() && !it->is_null()) {
      node.capacity = GetInteger(*it, at + ".capacity");
    }
    AtField(at, [&] { state.AddNode(std::move(node)); });
  }
  if (auto it = j.find("pods"); it != j.end()) {
    if (!it->is_array()) Bad("pods", "expected an array");
    for (size_t i = 0; i < it->size(); ++i) {
      std::string at = "pods[" + std::to_string(i) + "]";
      PodSpec pod = PodFromJson((*it)[i], at);
      AtField(at, [&] { state.AddPod(std::move(pod)); });
    }
  }
  if (auto it = j.find("assignment"); it != j.end()) {
    if (!it->is_object()) Bad("assignment", "expected an object");
    for (const auto& [pod_id, node_id] : it->items()) {
      std::string at = "assignment." + pod_id;
      std::string node = GetString(node_id, at);
      AtField(at, [&] { state.Assign(pod_id, node); });
    }
  }
  return state;
}

Json ClusterToJson(const ClusterState& state) {
  Json nodes = Json::array();
  for (const auto& node : state.nodes()) {
    Json n = {{"id", node.id}};
    if (node.capacity) n["capacity"] = *node.capacity;
    nodes.push_back(n);
  }
  Json pods = Json::array();
  for (const auto& [id, pod] : state.pods()) pods.push_back(PodToJson(pod));
  Json assignment = Json::object();
  for (const auto& [pod, node] : state.assignment()) assignment[pod] = node;
  return {{"nodes", nodes}, {"pods", pods}, {"assignment", assignment}};
}

ClusterState LoadCluster(const std::filesystem::path& path) {
  Json j = ReadJsonFile(path);
  try {
    return ClusterFromJson(j);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void SaveCluster(const ClusterState& state,
                 const std::filesystem::path& path) {
  WriteTextFile(path, ClusterToJson(state).dump(2) + "\n");
}

PodSpec LoadPod(const std::filesystem::path& path) {
  Json j = ReadJsonFile(path);
  try {
    if (j.is_object() && j.contains("pods")) {
      CheckKeys(j, "pods-file", {"pods"});
      const Json& pods = j["pods"];
      if (!pods.is_array() || pods.size() != 1) {
        Bad("pods", "expected exactly one pod");
      }
      return PodFromJson(pods[0], "pods[0]");
    }
    return PodFromJson(j, "pod");
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

Json PodsToJson(const std::vector<PodSpec>& pods) {
  Json list = Json::array();
  for (const auto& pod : pods) list.push_back(PodToJson(pod));
  return {{"pods", list}};
}

UsageByPod UsageFromJson(const Json& j) {
  if (!j.is_object()) Bad("usage", "expected an object keyed by pod id");
  UsageByPod usage;
  for (const auto& [pod_id, resources] : j.items()) {
    if (!resources.is_object()) Bad(pod_id, "expected an object");
    for (const auto& [resource_name, body] : resources.items()) {
      std::string at = pod_id + "." + resource_name;
      UsageSeries series;
      series.resource =
          AtField(at, [&] { return ParseResourceKind(resource_name); });
      CheckKeys(body, at, {"capacity", "samples"});
      series.capacity =
          GetNumber(Required(body, at, "capacity"), at + ".capacity");
      const Json& samples = Required(body, at, "samples");
      if (!samples.is_array()) Bad(at + ".samples", "expected an array");
      for (size_t i = 0; i < samples.size(); ++i) {
        std::string sat = at + ".samples[" + std::to_string(i) + "]";
        if (!samples[i].is_array() || samples[i].size() != 2) {
          Bad(sat, "expected [timestamp, value]");
        }
        UsageSample sample;
        sample.time = AtField(
            sat, [&] { return ParseIso8601(GetString(samples[i][0], sat)); });
        sample.value = GetNumber(samples[i][1], sat);
        series.samples.push_back(sample);
      }
      usage[pod_id][series.resource] = std::move(series);
    }
  }
  return usage;
}

UsageByPod UsageFromCsv(std::istream& in) {
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      auto b = cell.find_first_not_of(" \t\r");
      auto e = cell.find_last_not_of(" \t\r");
      cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
  };
  auto number = [](const std::string& text, const std::string& at) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      Bad(at, "'" + text + "' is not a number");
    }
    return v;
  };

  std::string line;
  size_t line_no = 0;
  bool header_seen = false;
  UsageByPod usage;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cells = split(line);
    std::string at = "line " + std::to_string(line_no);
    if (!header_seen) {
      const std::vector<std::string> expected = {"pod_id", "resource",
                                                 "timestamp", "value",
                                                 "capacity"};
      if (cells != expected) {
        Bad(at, "expected header pod_id,resource,timestamp,value,capacity");
      }
      header_seen = true;
      continue;
    }
    if (cells.size() != 5) Bad(at, "expected 5 columns");
    if (cells[0].empty()) Bad(at, "empty pod_id");
    ResourceKind resource =
        AtField(at, [&] { return ParseResourceKind(cells[1]); });
    UsageSample sample;
    sample.time = AtField(at, [&] { return ParseIso8601(cells[2]); });
    sample.value = number(cells[3], at);
    double capacity = number(cells[4], at);
    auto& by_resource = usage[cells[0]];
    auto [it, inserted] = by_resource.try_emplace(resource);
    if (inserted) {
      it->second.resource = resource;
      it->second.capacity = capacity;
    } else if (it->second.capacity != capacity) {
      Bad(at, "capacity differs from earlier rows of the same series");
    }
    it->second.samples.push_back(sample);
  }
  if (!header_seen) Bad("csv", "missing header row");
  return usage;
}

UsageByPod LoadUsage(const std::filesystem::path& path) {
  try {
    if (path.extension() == ".csv") {
      std::ifstream in(path);
      if (!in) {
        throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
      }
      return UsageFromCsv(in);
    }
    return UsageFromJson(ReadJsonFile(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kIo) throw;
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

LabelerConfig LabelerConfigFromJson(const Json& j) {
  CheckKeys(j, "config",
            {"magnitude_mode", "low_cutoff", "high_cutoff", "cv_always_max",
             "slope_gradual_min"});
  LabelerConfig config;
  if (auto it = j.find("magnitude_mode"); it != j.end()) {
    std::string mode = GetString(*it, "config.magnitude_mode");
    if (mode == "mean") {
      config.magnitude_mode = MagnitudeMode::kMean;
    } else if (mode == "peak") {
      config.magnitude_mode = MagnitudeMode::kPeak;
    } else {
      Bad("config.magnitude_mode", "unknown mode '" + mode + "'");
    }
  }
  auto read = [&](const char* key, double& field) {
    if (auto it = j.find(key); it != j.end()) {
      field = GetNumber(*it, std::string("config.") + key);
    }
  };
  read("low_cutoff", config.low_cutoff);
  read("high_cutoff", config.high_cutoff);
  read("cv_always_max", config.cv_always_max);
  read("slope_gradual_min", config.slope_gradual_min);
  ValidateConfig(config);
  return config;
}

RebalanceConfig RebalanceConfigFromJson(const Json& j,
                                        const std::string& where) {
  RebalanceConfig config;
  if (auto it = j.find("max_moves"); it != j.end()) {
    config.max_moves = GetInteger(*it, where + ".max_moves");
  }
  if (auto it = j.find("max_passes"); it != j.end()) {
    config.max_passes = GetInteger(*it, where + ".max_passes");
  }
  if (auto it = j.find("min_improvement"); it != j.end()) {
    config.min_improvement = GetNumber(*it, where + ".min_improvement");
  }
  AtField(where, [&] { ValidateConfig(config); });
  return config;
}

Json RebalanceConfigToJson(const RebalanceConfig& config) {
  return {{"max_moves", config.max_moves},
          {"max_passes", config.max_passes},
          {"min_improvement", config.min_improvement}};
}

Json ReportToJson(const DistributednessReport& report) {
  Json labels = Json::object();
  for (const auto& [label, entry] : report.labels) {
    labels[label] = {{"counts", entry.counts}, {"factor", entry.factor}};
  }
  return {{"convention", std::string(ToString(report.convention))},
          {"labels", labels}};
}

std::string ReportToTable(const DistributednessReport& report,
                          const ClusterState& state) {
  std::ostringstream out;
  out << "convention: " << ToString(report.convention) << "\n";
  if (report.labels.empty()) {
    out << "(no assigned pods)\n";
    return out.str();
  }
  size_t label_width = 5;
  for (const auto& [label, entry] : report.labels) {
    label_width = std::max(label_width, label.size());
  }
  size_t node_width = 4;
  for (const auto& node : state.nodes()) {
    node_width = std::max(node_width, node.id.size());
  }
  out << std::left << std::setw(static_cast<int>(node_width)) << "node";
  for (const auto& [label, entry] : report.labels) {
    out << "  " << std::right << std::setw(static_cast<int>(label_width))
        << label;
  }
  out << "\n";
  for (size_t i = 0; i < state.nodes().size(); ++i) {
    out << std::left << std::setw(static_cast<int>(node_width))
        << state.nodes()[i].id;
    for (const auto& [label, entry] : report.labels) {
      out << "  " << std::right << std::setw(static_cast<int>(label_width))
          << entry.counts[i];
    }
    out << "\n";
  }
  out << std::left << std::setw(static_cast<int>(node_width)) << "factor";
  for (const auto& [label, entry] : report.labels) {
    out << "  " << std::right << std::setw(static_cast<int>(label_width))
        << FormatDouble(entry.factor);
  }
  out << "\n";
  return out.str();
}

Json DecisionToJson(const PlacementDecision& decision) {
  Json scores = Json::array();
  for (const auto& score : decision.scores) {
    Json s = {{"node", score.node_id}, {"feasible", score.feasible}};
    if (score.feasible) {
      s["aggregate"] = score.aggregate;
      s["per_label"] = score.per_label;
    } else {
      s["reason"] = score.reason;
    }
    scores.push_back(s);
  }
  return {{"pod", decision.pod_id()},
          {"chosen_node", decision.chosen_node},
          {"convention", std::string(ToString(decision.convention))},
          {"fingerprint", FingerprintHex(decision.state_fingerprint)},
          {"scores", scores}};
}

std::string DecisionToTable(const PlacementDecision& decision) {
  std::ostringstream out;
  out << "pod " << decision.pod_id() << " -> " << decision.chosen_node
      << " (" << ToString(decision.convention) << " variance)\n";
  size_t width = 4;
  for (const auto& score : decision.scores) {
    width = std::max(width, score.node_id.size());
  }
  out << "  " << std::left << std::setw(static_cast<int>(width)) << "node"
      << "  " << std::right << std::setw(12) << "aggregate" << "\n";
  for (const auto& score : decision.scores) {
    out << (score.node_id == decision.chosen_node ? "* " : "  ") << std::left
        << std::setw(static_cast<int>(width)) << score.node_id << "  "
        << std::right << std::setw(12)
        << (score.feasible ? FormatDouble(score.aggregate) : "-");
    if (!score.feasible) out << "  " << score.reason;
    out << "\n";
  }
  return out.str();
}

Json PlanToJson(const RebalancePlan& plan) {
  Json moves = Json::array();
  for (const auto& move : plan.moves) {
    moves.push_back({{"pod", move.pod_id},
                     {"from", move.from_node},
                     {"to", move.to_node},
                     {"total_before", move.total_before},
                     {"total_after", move.total_after}});
  }
  return {{"initial_total", plan.initial_total},
          {"final_total", plan.final_total},
          {"moves", moves}};
}

RebalancePlan PlanFromJson(const Json& j) {
  CheckKeys(j, "plan", {"initial_total", "final_total", "moves"});
  RebalancePlan plan;
  plan.initial_total =
      GetNumber(Required(j, "plan", "initial_total"), "plan.initial_total");
  plan.final_total =
      GetNumber(Required(j, "plan", "final_total"), "plan.final_total");
  const Json& moves = Required(j, "plan", "moves");
  if (!moves.is_array()) Bad("plan.moves", "expected an array");
  for (size_t i = 0; i < moves.size(); ++i) {
    std::string at = "plan.moves[" + std::to_string(i) + "]";
    CheckKeys(moves[i], at,
              {"pod", "from", "to", "total_before", "total_after"});
    plan.moves.push_back(
        {GetString(Required(moves[i], at, "pod"), at + ".pod"),
         GetString(Required(moves[i], at, "from"), at + ".from"),
         GetString(Required(moves[i], at, "to"), at + ".to"),
         GetNumber(Required(moves[i], at, "total_before"), at),
         GetNumber(Required(moves[i], at, "total_after"), at)});
  }
  return plan;
}

std::string PlanToTable(const RebalancePlan& plan) {
  std::ostringstream out;
  out << "initial total " << FormatDouble(plan.initial_total)
      << ", final total " << FormatDouble(plan.final_total) << ", "
      << plan.moves.size() << " move(s)\n";
  for (size_t i = 0; i < plan.moves.size(); ++i) {
    const auto& m = plan.moves[i];
    out << std::setw(4) << i + 1 << ". " << m.pod_id << ": " << m.from_node
        << " -> " << m.to_node << "  (" << FormatDouble(m.total_before)
        << " -> " << FormatDouble(m.total_after) << ")\n";
  }
  return out.str();
}

}  // namespace distsched
