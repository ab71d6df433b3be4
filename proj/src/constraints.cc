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

#include "dglbf/constraints.h"

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace dglbf {

std::optional<double> ReliabilityOk(double path_rel, double link_rel,
                                    double req_rel) {
  const double next = path_rel * link_rel;
  if (next >= req_rel) return next;
  return std::nullopt;
}

double PathReliability(const Network& network,
                       std::span<const LinkIndex> links) {
  double r = 1.0;
  for (LinkIndex l : links) r *= network.link(l).reliability;
  return r;
}

absl::StatusOr<double> PathReliability(const KnowledgeBase& kb,
                                       std::span<const std::string> nodes) {
  double r = 1.0;
  for (size_t i = 0; i + 1 < nodes.size(); ++i) {
    auto it = std::find_if(kb.links.begin(), kb.links.end(), [&](const Link& l) {
      return l.src == nodes[i] && l.dst == nodes[i + 1];
    });
    if (it == kb.links.end()) {
      return absl::NotFoundError(
          absl::StrCat("no link ", nodes[i], " -> ", nodes[i + 1]));
    }
    r *= it->reliability;
  }
  return r;
}

double RouteReliability(std::span<const double> path_reliabilities) {
  if (path_reliabilities.empty()) return 0.0;
  double fail = 1.0;
  for (double r : path_reliabilities) fail *= 1.0 - r;
  return 1.0 - fail;
}

bool PathProtection(std::span<const std::string> candidate,
                    std::span<const std::string> chosen) {
  return IntermediatesDisjoint(candidate, chosen);
}

bool NoFateSharing(std::span<const std::string> candidate,
                   std::span<const std::vector<std::string>> avoided_paths) {
  for (const auto& other : avoided_paths) {
    if (!IntermediatesDisjoint(candidate, std::span<const std::string>(other))) {
      return false;
    }
  }
  return true;
}

bool ValidCandidate(const FlowRequest& flow, const CandidatePath& candidate,
                    std::span<const ReplicaAllocation> chosen_replicas,
                    std::span<const ReplicaAllocation> placed) {
  for (const ReplicaAllocation& r : chosen_replicas) {
    if (r.path_id == candidate.id) return false;
    if (!PathProtection(candidate.nodes, r.path)) return false;
  }
  std::vector<std::vector<std::string>> avoided;
  for (const ReplicaAllocation& a : placed) {
    if (flow.anti_affinity.contains(a.flow)) avoided.push_back(a.path);
  }
  return NoFateSharing(candidate.nodes, avoided);
}

ReliabilityReport BuildReliabilityReport(
    std::span<const ReplicaAllocation> allocations) {
  ReliabilityReport report;
  std::map<std::string, std::vector<double>> by_flow;
  for (const ReplicaAllocation& a : allocations) {
    report.per_path[{a.flow, a.replica}] = a.path_reliability;
    by_flow[a.flow].push_back(a.path_reliability);
  }
  for (const auto& [flow, rels] : by_flow) {
    report.per_flow_route[flow] = RouteReliability(rels);
  }
  return report;
}

}  // namespace dglbf
