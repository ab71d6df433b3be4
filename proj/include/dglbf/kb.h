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
// Knowledge base: the infrastructure (nodes, directed links) and the ordered
// list of flow requests to place. Two textual encodings are supported:
//
//   * the facts format, one Prolog-style clause per fact:
//       node(du11, 3).
//       link(du11, ns11, 3, 440, 0.9928).
//       flow(f2, ns12, ns6).
//       flowReqs(f2, 0.01, 4, 10, 100, 10).      % dataReqs/6 is a synonym
//       reliabilityReqs(f2, 0.85, 2).
//       antiAffinity(f1, [f3]).
//       candidate(p1, ns12, ns6, [ns12, ns21, ns31, ns6]).
//
//   * a JSON document with "nodes", "links", "flows" and "candidates" arrays
//     (see README.md for the schema).
//
// Both are decoded into the same KnowledgeBase, validated, and normalized:
// missing reliability requirements default to (0, 1), missing anti-affinity
// to the empty set, and anti-affinity is made symmetric.

#ifndef DGLBF_KB_H_
#define DGLBF_KB_H_

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace dglbf {

struct Node {
  std::string id;
  double d_proc = 0;  // ms

  bool operator==(const Node&) const = default;
};

// Directed link src -> dst.
struct Link {
  std::string src;
  std::string dst;
  double d_prop = 0;       // ms
  double bandwidth = 0;    // Mbps
  double reliability = 1;  // probability the link is up

  bool operator==(const Link&) const = default;
};

struct FlowRequest {
  std::string id;
  std::string src;
  std::string dst;
  double pkt_size = 0;        // Mb
  int burst_size = 1;         // packets
  double rate = 0;            // Mbps
  double latency_budget = 0;  // ms
  double tolerance = 0;       // ms; arrival window is budget +- tolerance
  double req_rel = 0;
  int replica_factor = 1;
  std::set<std::string> anti_affinity;

  // Lower edge of the arrival window.
  double min_budget() const { return latency_budget - tolerance; }

  bool operator==(const FlowRequest&) const = default;
};

// Externally supplied candidate path; overrides enumeration for its pair.
struct CandidateFact {
  std::string id;
  std::string src;
  std::string dst;
  std::vector<std::string> nodes;

  bool operator==(const CandidateFact&) const = default;
};

struct KnowledgeBase {
  std::vector<Node> nodes;
  std::vector<Link> links;
  std::vector<FlowRequest> flows;  // placement order
  std::vector<CandidateFact> candidates;

  const FlowRequest* FindFlow(absl::string_view id) const;

  bool operator==(const KnowledgeBase&) const = default;
};

enum class ViolationCode {
  kDuplicateNode,
  kDuplicateLink,
  kDuplicateFlow,
  kDuplicateFlowReqs,
  kDuplicateReliabilityReqs,
  kDuplicateAntiAffinity,
  kDuplicateCandidate,
  kMissingFlowReqs,
  kDanglingReference,
  kSelfLoop,
  kNegativeProcessingDelay,
  kNegativePropagationDelay,
  kNonPositiveBandwidth,
  kReliabilityOutOfRange,
  kFlowEndpointsEqual,
  kNonPositivePacketSize,
  kNonPositiveBurstSize,
  kNonPositiveRate,
  kToleranceOutOfRange,
  kRequiredReliabilityOutOfRange,
  kNonPositiveReplicaFactor,
  kSelfAntiAffinity,
  kInvalidCandidate,
  kInvalidIdentifier,
};

// Stable machine-readable name, e.g. "ReliabilityOutOfRange".
absl::string_view ViolationCodeName(ViolationCode code);

struct Violation {
  ViolationCode code;
  std::string message;
  std::string location;  // "source:line" when known, empty otherwise
};

// Reports every invariant violation in `kb`. An empty result means valid.
std::vector<Violation> ValidateKb(const KnowledgeBase& kb);

// Applies the defaulting rules that do not depend on missing facts:
// symmetrizes anti-affinity. Idempotent.
void NormalizeKb(KnowledgeBase& kb);

// Parses a facts-format document. Syntax errors carry "line:col"; validation
// failures list every violation with its source line.
absl::StatusOr<KnowledgeBase> ParseKb(absl::string_view text);

// Parses the JSON encoding.
absl::StatusOr<KnowledgeBase> ParseKbJson(absl::string_view text);

// Dispatches on content: documents whose first non-blank character is '{'
// are JSON, everything else is facts.
absl::StatusOr<KnowledgeBase> ParseKbAuto(absl::string_view text);

struct SourceDocument {
  std::string name;  // used as the location prefix in error messages
  std::string text;
};

// Parses several documents (each facts or JSON, detected per document) as one
// knowledge base, e.g. a topology file plus a flows file. References may cross
// documents.
absl::StatusOr<KnowledgeBase> ParseKbDocuments(
    const std::vector<SourceDocument>& documents);

// Reads the files and parses them with ParseKbDocuments.
absl::StatusOr<KnowledgeBase> LoadKbFiles(const std::vector<std::string>& paths);

// Serializes back to the facts format. Numbers use the shortest
// representation that round-trips.
std::string ToFacts(const KnowledgeBase& kb);

std::string ToJson(const KnowledgeBase& kb);

// Shortest round-trip decimal rendering used by every writer in the project.
std::string FormatNumber(double value);

bool IsValidIdentifier(absl::string_view id);

}  // namespace dglbf

#endif  // DGLBF_KB_H_
