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
// Candidate path enumeration. Candidates for a (src, dst) pair are the simple
// directed paths between them in canonical order: fewest hops first, ties
// broken by lexicographic comparison of the node-id sequence. Enumeration is
// lazy, so bounded limits stay cheap on dense graphs.

#ifndef DGLBF_PATHGEN_H_
#define DGLBF_PATHGEN_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dglbf/kb.h"
#include "dglbf/network.h"

namespace dglbf {

struct CandidatePath {
  std::string id;
  std::string src;
  std::string dst;
  std::vector<std::string> nodes;

  int hop_count() const { return static_cast<int>(nodes.size()) - 1; }

  bool operator==(const CandidatePath&) const = default;
};

struct EnumerationLimits {
  // Absolute cap on hop count.
  std::optional<int> max_hops;
  // Cap relative to the pair's shortest hop count.
  std::optional<int> hop_slack;
  std::optional<int> max_candidates_per_pair;

  // Shortest hop count + 3, at most 64 candidates per pair.
  static EnumerationLimits Default() {
    return {.max_hops = std::nullopt, .hop_slack = 3,
            .max_candidates_per_pair = 64};
  }
  // Every simple path. Only sensible on small graphs.
  static EnumerationLimits Unbounded() { return {}; }
};

// All simple paths from `src` to `dst` within `limits`, in canonical order.
// Unknown or equal endpoints and unreachable pairs yield an empty list.
std::vector<CandidatePath> EnumerateCandidates(const Network& network,
                                               const std::string& src,
                                               const std::string& dst,
                                               const EnumerationLimits& limits);

std::vector<CandidatePath> EnumerateCandidates(const KnowledgeBase& kb,
                                               const std::string& src,
                                               const std::string& dst,
                                               const EnumerationLimits& limits);

using EndpointPair = std::pair<std::string, std::string>;
using CandidateIndex = std::map<EndpointPair, std::vector<CandidatePath>>;

// One entry per distinct endpoint pair among `flows`, each pair enumerated
// once. Pairs covered by candidate facts in `kb` use those facts, in
// declaration order, instead of enumeration. With parallelism > 1, distinct
// pairs are enumerated on that many threads.
CandidateIndex BuildCandidateIndex(const KnowledgeBase& kb,
                                   const Network& network,
                                   std::span<const FlowRequest> flows,
                                   const EnumerationLimits& limits,
                                   int parallelism = 1);

// Same, over every flow in `kb`.
CandidateIndex BuildCandidateIndex(const KnowledgeBase& kb,
                                   const Network& network,
                                   const EnumerationLimits& limits);

// candidate(P, N, M, [..]). lines.
std::string CandidatesToFacts(std::span<const CandidatePath> candidates);

}  // namespace dglbf

#endif  // DGLBF_PATHGEN_H_
