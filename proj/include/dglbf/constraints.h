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
//
// Reliability, 1+1 path protection and anti-affinity predicates.

#ifndef DGLBF_CONSTRAINTS_H_
#define DGLBF_CONSTRAINTS_H_

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "dglbf/allocation.h"
#include "dglbf/kb.h"
#include "dglbf/network.h"
#include "dglbf/pathgen.h"

namespace dglbf {

// path_rel * link_rel if that is at least req_rel.
std::optional<double> ReliabilityOk(double path_rel, double link_rel,
                                    double req_rel);

// Product of the link reliabilities along `links`.
double PathReliability(const Network& network, std::span<const LinkIndex> links);

// Same, for a node sequence; fails if a link is missing.
absl::StatusOr<double> PathReliability(const KnowledgeBase& kb,
                                       std::span<const std::string> nodes);

// 1 - prod(1 - r). Empty input gives 0.
double RouteReliability(std::span<const double> path_reliabilities);

// True iff the paths share no node once each loses its own first and last
// element.
template <typename T>
bool IntermediatesDisjoint(std::span<const T> a, std::span<const T> b) {
  if (a.size() <= 2 || b.size() <= 2) return true;
  for (size_t i = 1; i + 1 < a.size(); ++i) {
    for (size_t j = 1; j + 1 < b.size(); ++j) {
      if (a[i] == b[j]) return false;
    }
  }
  return true;
}

// Replica disjointness: the two paths meet only at their endpoints.
bool PathProtection(std::span<const std::string> candidate,
                    std::span<const std::string> chosen);

// Anti-affinity against every placed path of the flows `candidate`'s flow
// avoids.
bool NoFateSharing(std::span<const std::string> candidate,
                   std::span<const std::vector<std::string>> avoided_paths);

// Admission filter for one replica candidate. `chosen_replicas` are the
// flow's already placed replicas; `placed` is every placed allocation.
bool ValidCandidate(const FlowRequest& flow, const CandidatePath& candidate,
                    std::span<const ReplicaAllocation> chosen_replicas,
                    std::span<const ReplicaAllocation> placed);

struct ReliabilityReport {
  // (flow, replica) -> r(P)
  std::map<std::pair<std::string, int>, double> per_path;
  // flow -> 1 - prod(1 - r(P))
  std::map<std::string, double> per_flow_route;
};

ReliabilityReport BuildReliabilityReport(
    std::span<const ReplicaAllocation> allocations);

}  // namespace dglbf

#endif  // DGLBF_CONSTRAINTS_H_
