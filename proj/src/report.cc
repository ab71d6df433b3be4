// Copyright 2026 The dglbf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// -----------------------------------------------------------------------------

#include "dglbf/report.h"

#include <algorithm>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "nlohmann/json.hpp"

namespace dglbf {
namespace {

using nlohmann::json;

// Fixed decimals with trailing zeros dropped; never prints "-0".
std::string Display(double value, int decimals) {
  std::string s = absl::StrFormat("%.*f", decimals, value);
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

double RouteRel(const PlacementResult& result, const std::string& flow) {
  auto it = result.route_reliability.find(flow);
  return it == result.route_reliability.end() ? 0.0 : it->second;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

absl::StatusOr<OutputFormat> ParseOutputFormat(absl::string_view text) {
  if (text == "table") return OutputFormat::kTable;
  if (text == "json") return OutputFormat::kJson;
  if (text == "csv") return OutputFormat::kCsv;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown format '", text, "' (expected table, json or csv)"));
}

absl::StatusOr<PlacementStatus> ParsePlacementStatus(absl::string_view text) {
  for (PlacementStatus s : {PlacementStatus::kSuccess,
                            PlacementStatus::kInfeasible,
                            PlacementStatus::kTimeout}) {
    if (text == PlacementStatusName(s)) return s;
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown status '", text, "'"));
}

std::string FormatTable(const PlacementResult& result) {
  std::vector<std::vector<std::string>> rows = {
      {"Flow", "Replicas", "Path", "Path Rel. [%]", "MinB [ms]", "MaxB [ms]",
       "Per-hop additional delay [ms]", "Route Rel. [%]"}};
  for (const ReplicaAllocation& a : result.allocations) {
    rows.push_back({a.flow, absl::StrCat(a.replica),
                    absl::StrCat("[", absl::StrJoin(a.path, ", "), "]"),
                    Display(100 * a.path_reliability, 2), Display(a.min_b, 2),
                    Display(a.max_b, 2), Display(a.per_hop_delay, 2),
                    Display(100 * RouteRel(result, a.flow), 4)});
  }
  std::vector<size_t> width(rows[0].size(), 0);
  for (const auto& row : rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  std::string out;
  auto rule = [&] {
    for (size_t c = 0; c < width.size(); ++c) {
      absl::StrAppend(&out, "+", std::string(width[c] + 2, '-'));
    }
    absl::StrAppend(&out, "+\n");
  };
  rule();
  for (size_t r = 0; r < rows.size(); ++r) {
    for (size_t c = 0; c < rows[r].size(); ++c) {
      absl::StrAppend(&out, "| ", rows[r][c],
                      std::string(width[c] - rows[r][c].size() + 1, ' '));
    }
    absl::StrAppend(&out, "|\n");
    if (r == 0) rule();
  }
  rule();
  absl::StrAppend(&out, "Status: ", PlacementStatusName(result.status));
  if (!result.blocking_flow.empty()) {
    absl::StrAppend(&out, " (blocking flow ", result.blocking_flow, ")");
  }
  absl::StrAppend(&out, absl::StrFormat(
                            "; %.3f ms, %d backtracks, %d candidates tried\n",
                            result.stats.elapsed_ms, result.stats.backtracks,
                            result.stats.candidates_tried));
  return out;
}

std::string PlacementToJson(const PlacementResult& result) {
  json doc;
  doc["status"] = std::string(PlacementStatusName(result.status));
  json allocs = json::array();
  for (const ReplicaAllocation& a : result.allocations) {
    allocs.push_back({{"flow", a.flow},
                      {"replica", a.replica},
                      {"path_id", a.path_id},
                      {"path", a.path},
                      {"path_rel", a.path_reliability},
                      {"min_b", a.min_b},
                      {"max_b", a.max_b},
                      {"per_hop_delay", a.per_hop_delay}});
  }
  doc["allocations"] = std::move(allocs);
  json route = json::object();
  for (const auto& [flow, r] : result.route_reliability) route[flow] = r;
  doc["route_rel"] = std::move(route);
  json loads = json::array();
  for (const auto& [link, load] : result.link_loads) {
    loads.push_back({{"src", link.first}, {"dst", link.second}, {"load", load}});
  }
  doc["link_loads"] = std::move(loads);
  doc["stats"] = {{"elapsed_ms", result.stats.elapsed_ms},
                  {"backtracks", result.stats.backtracks},
                  {"candidates_tried", result.stats.candidates_tried},
                  {"max_depth", result.stats.max_depth}};
  doc["blocking_flow"] =
      result.blocking_flow.empty() ? json(nullptr) : json(result.blocking_flow);
  return doc.dump(2) + "\n";
}

absl::StatusOr<PlacementResult> PlacementFromJson(absl::string_view text) {
  json doc = json::parse(text.begin(), text.end(), nullptr,
                         /*allow_exceptions=*/false);
  if (doc.is_discarded()) return absl::InvalidArgumentError("malformed JSON");
  try {
    PlacementResult result;
    auto status = ParsePlacementStatus(doc.at("status").get<std::string>());
    if (!status.ok()) return status.status();
    result.status = *status;
    for (const json& a : doc.at("allocations")) {
      ReplicaAllocation alloc;
      alloc.flow = a.at("flow").get<std::string>();
      alloc.replica = a.at("replica").get<int>();
      alloc.path_id = a.at("path_id").get<std::string>();
      alloc.path = a.at("path").get<std::vector<std::string>>();
      alloc.path_reliability = a.at("path_rel").get<double>();
      alloc.min_b = a.at("min_b").get<double>();
      alloc.max_b = a.at("max_b").get<double>();
      alloc.per_hop_delay = a.at("per_hop_delay").get<double>();
      result.allocations.push_back(std::move(alloc));
    }
    for (const auto& [flow, r] : doc.at("route_rel").items()) {
      result.route_reliability[flow] = r.get<double>();
    }
    for (const json& l : doc.at("link_loads")) {
      result.link_loads[{l.at("src").get<std::string>(),
                         l.at("dst").get<std::string>()}] =
          l.at("load").get<double>();
    }
    const json& stats = doc.at("stats");
    result.stats.elapsed_ms = stats.at("elapsed_ms").get<double>();
    result.stats.backtracks = stats.at("backtracks").get<int64_t>();
    result.stats.candidates_tried = stats.at("candidates_tried").get<int64_t>();
    result.stats.max_depth = stats.at("max_depth").get<int>();
    if (!doc.at("blocking_flow").is_null()) {
      result.blocking_flow = doc.at("blocking_flow").get<std::string>();
    }
    return result;
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("bad placement JSON: ", e.what()));
  }
}

std::string PlacementToCsv(const PlacementResult& result) {
  std::string out =
      "flow,replica,path_id,path,path_rel,route_rel,min_b,max_b,per_hop_delay\n";
  for (const ReplicaAllocation& a : result.allocations) {
    absl::StrAppend(&out, CsvField(a.flow), ",", a.replica, ",",
                    CsvField(a.path_id), ",", absl::StrJoin(a.path, " "), ",",
                    FormatNumber(a.path_reliability), ",",
                    FormatNumber(RouteRel(result, a.flow)), ",",
                    FormatNumber(a.min_b), ",", FormatNumber(a.max_b), ",",
                    FormatNumber(a.per_hop_delay), "\n");
  }
  return out;
}

}  // namespace dglbf
