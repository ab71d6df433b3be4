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
// Decoded but not yet assembled facts. Both input encodings produce this; the
// assembler joins per-flow requirement facts onto flows and reports
// duplicates and dangling references.

#ifndef DGLBF_SRC_RAW_FACTS_H_
#define DGLBF_SRC_RAW_FACTS_H_

#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/string_view.h"
#include "dglbf/kb.h"

namespace dglbf::internal {

struct RawFlow {
  std::string id, src, dst;
  std::string location;
};

struct RawFlowReqs {
  std::string flow;
  double pkt_size = 0;
  int burst_size = 0;
  double rate = 0;
  double latency_budget = 0;
  double tolerance = 0;
  std::string location;
};

struct RawReliabilityReqs {
  std::string flow;
  double req_rel = 0;
  int replica_factor = 0;
  std::string location;
};

struct RawAntiAffinity {
  std::string flow;
  std::vector<std::string> avoided;
  std::string location;
};

struct RawFacts {
  std::vector<Node> nodes;
  std::vector<std::string> node_locations;
  std::vector<Link> links;
  std::vector<std::string> link_locations;
  std::vector<RawFlow> flows;
  std::vector<RawFlowReqs> flow_reqs;
  std::vector<RawReliabilityReqs> reliability_reqs;
  std::vector<RawAntiAffinity> anti_affinity;
  std::vector<CandidateFact> candidates;
  std::vector<std::string> candidate_locations;
};

// Appends the facts of one facts-format document to `out`.
absl::Status ParseFactsInto(absl::string_view source_name, absl::string_view text,
                            RawFacts& out);

// Appends the facts of one JSON document to `out`.
absl::Status ParseJsonInto(absl::string_view source_name, absl::string_view text,
                           RawFacts& out);

// Location of every KB entity, parallel to the KnowledgeBase vectors.
struct KbLocations {
  std::vector<std::string> nodes;
  std::vector<std::string> links;
  std::vector<std::string> flows;
  std::vector<std::string> candidates;
};

// Joins raw facts into a knowledge base. Assembly-level problems (duplicate
// requirement facts, requirements for undeclared flows, flows without
// requirements) are appended to `violations`.
KnowledgeBase Assemble(const RawFacts& raw, KbLocations& locations,
                       std::vector<Violation>& violations);

std::vector<Violation> ValidateKbWithLocations(const KnowledgeBase& kb,
                                               const KbLocations* locations);

}  // namespace dglbf::internal

#endif  // DGLBF_SRC_RAW_FACTS_H_
