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

#include "dglbf/kb.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/container/flat_hash_set.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/string_view.h"
#include "nlohmann/json.hpp"
#include "raw_facts.h"

namespace dglbf {

using internal::KbLocations;
using internal::RawFacts;

const FlowRequest* KnowledgeBase::FindFlow(absl::string_view id) const {
  for (const FlowRequest& flow : flows) {
    if (flow.id == id) return &flow;
  }
  return nullptr;
}

absl::string_view ViolationCodeName(ViolationCode code) {
  switch (code) {
    case ViolationCode::kDuplicateNode:
      return "DuplicateNode";
    case ViolationCode::kDuplicateLink:
      return "DuplicateLink";
    case ViolationCode::kDuplicateFlow:
      return "DuplicateFlow";
    case ViolationCode::kDuplicateFlowReqs:
      return "DuplicateFlowReqs";
    case ViolationCode::kDuplicateReliabilityReqs:
      return "DuplicateReliabilityReqs";
    case ViolationCode::kDuplicateAntiAffinity:
      return "DuplicateAntiAffinity";
    case ViolationCode::kDuplicateCandidate:
      return "DuplicateCandidate";
    case ViolationCode::kMissingFlowReqs:
      return "MissingFlowReqs";
    case ViolationCode::kDanglingReference:
      return "DanglingReference";
    case ViolationCode::kSelfLoop:
      return "SelfLoop";
    case ViolationCode::kNegativeProcessingDelay:
      return "NegativeProcessingDelay";
    case ViolationCode::kNegativePropagationDelay:
      return "NegativePropagationDelay";
    case ViolationCode::kNonPositiveBandwidth:
      return "NonPositiveBandwidth";
    case ViolationCode::kReliabilityOutOfRange:
      return "ReliabilityOutOfRange";
    case ViolationCode::kFlowEndpointsEqual:
      return "FlowEndpointsEqual";
    case ViolationCode::kNonPositivePacketSize:
      return "NonPositivePacketSize";
    case ViolationCode::kNonPositiveBurstSize:
      return "NonPositiveBurstSize";
    case ViolationCode::kNonPositiveRate:
      return "NonPositiveRate";
    case ViolationCode::kToleranceOutOfRange:
      return "ToleranceOutOfRange";
    case ViolationCode::kRequiredReliabilityOutOfRange:
      return "RequiredReliabilityOutOfRange";
    case ViolationCode::kNonPositiveReplicaFactor:
      return "NonPositiveReplicaFactor";
    case ViolationCode::kSelfAntiAffinity:
      return "SelfAntiAffinity";
    case ViolationCode::kInvalidCandidate:
      return "InvalidCandidate";
    case ViolationCode::kInvalidIdentifier:
      return "InvalidIdentifier";
  }
  return "Unknown";
}

bool IsValidIdentifier(absl::string_view id) {
  if (id.empty() || id[0] < 'a' || id[0] > 'z') return false;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

std::string FormatNumber(double value) {
  if (value == 0) return "0";  // folds -0
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) return absl::StrCat(value);
  return std::string(buffer, ptr);
}

namespace internal {
namespace {

bool InUnitInterval(double x) { return x >= 0 && x <= 1; }

std::string At(const std::vector<std::string>* locs, size_t i) {
  if (locs == nullptr || i >= locs->size()) return "";
  return (*locs)[i];
}

}  // namespace

KnowledgeBase Assemble(const RawFacts& raw, KbLocations& locations,
                       std::vector<Violation>& violations) {
  KnowledgeBase kb;
  kb.nodes = raw.nodes;
  locations.nodes = raw.node_locations;
  kb.links = raw.links;
  locations.links = raw.link_locations;
  kb.candidates = raw.candidates;
  locations.candidates = raw.candidate_locations;

  absl::flat_hash_set<std::string> declared;
  for (const RawFlow& f : raw.flows) declared.insert(f.id);

  absl::flat_hash_map<std::string, const internal::RawFlowReqs*> reqs;
  for (const auto& r : raw.flow_reqs) {
    if (!declared.contains(r.flow)) {
      violations.push_back({ViolationCode::kDanglingReference,
                            absl::StrCat("flowReqs for undeclared flow '",
                                         r.flow, "'"),
                            r.location});
      continue;
    }
    if (!reqs.emplace(r.flow, &r).second) {
      violations.push_back(
          {ViolationCode::kDuplicateFlowReqs,
           absl::StrCat("duplicate flowReqs for flow '", r.flow, "'"),
           r.location});
    }
  }
  absl::flat_hash_map<std::string, const internal::RawReliabilityReqs*> rel;
  for (const auto& r : raw.reliability_reqs) {
    if (!declared.contains(r.flow)) {
      violations.push_back({ViolationCode::kDanglingReference,
                            absl::StrCat("reliabilityReqs for undeclared flow '",
                                         r.flow, "'"),
                            r.location});
      continue;
    }
    if (!rel.emplace(r.flow, &r).second) {
      violations.push_back(
          {ViolationCode::kDuplicateReliabilityReqs,
           absl::StrCat("duplicate reliabilityReqs for flow '", r.flow, "'"),
           r.location});
    }
  }
  absl::flat_hash_map<std::string, const internal::RawAntiAffinity*> anti;
  for (const auto& r : raw.anti_affinity) {
    if (!declared.contains(r.flow)) {
      violations.push_back({ViolationCode::kDanglingReference,
                            absl::StrCat("antiAffinity for undeclared flow '",
                                         r.flow, "'"),
                            r.location});
      continue;
    }
    if (!anti.emplace(r.flow, &r).second) {
      violations.push_back(
          {ViolationCode::kDuplicateAntiAffinity,
           absl::StrCat("duplicate antiAffinity for flow '", r.flow, "'"),
           r.location});
    }
  }

  for (const RawFlow& f : raw.flows) {
    FlowRequest flow;
    flow.id = f.id;
    flow.src = f.src;
    flow.dst = f.dst;
    if (auto it = reqs.find(f.id); it != reqs.end()) {
      flow.pkt_size = it->second->pkt_size;
      flow.burst_size = it->second->burst_size;
      flow.rate = it->second->rate;
      flow.latency_budget = it->second->latency_budget;
      flow.tolerance = it->second->tolerance;
    } else {
      violations.push_back(
          {ViolationCode::kMissingFlowReqs,
           absl::StrCat("flow '", f.id, "' has no flowReqs fact"),
           f.location});
      // Placeholder traffic so the missing fact is reported exactly once.
      flow.pkt_size = 1;
      flow.burst_size = 1;
      flow.rate = 1;
    }
    if (auto it = rel.find(f.id); it != rel.end()) {
      flow.req_rel = it->second->req_rel;
      flow.replica_factor = it->second->replica_factor;
    }
    if (auto it = anti.find(f.id); it != anti.end()) {
      flow.anti_affinity.insert(it->second->avoided.begin(),
                                it->second->avoided.end());
    }
    kb.flows.push_back(std::move(flow));
    locations.flows.push_back(f.location);
  }
  return kb;
}

std::vector<Violation> ValidateKbWithLocations(const KnowledgeBase& kb,
                                               const KbLocations* locations) {
  std::vector<Violation> out;
  auto add = [&out](ViolationCode code, std::string message,
                    std::string location) {
    out.push_back({code, std::move(message), std::move(location)});
  };
  const auto* node_locs = locations ? &locations->nodes : nullptr;
  const auto* link_locs = locations ? &locations->links : nullptr;
  const auto* flow_locs = locations ? &locations->flows : nullptr;
  const auto* cand_locs = locations ? &locations->candidates : nullptr;

  absl::flat_hash_set<std::string> node_ids;
  for (size_t i = 0; i < kb.nodes.size(); ++i) {
    const Node& n = kb.nodes[i];
    if (!IsValidIdentifier(n.id)) {
      add(ViolationCode::kInvalidIdentifier,
          absl::StrCat("invalid node id '", n.id, "'"), At(node_locs, i));
    }
    if (!node_ids.insert(n.id).second) {
      add(ViolationCode::kDuplicateNode,
          absl::StrCat("duplicate node '", n.id, "'"), At(node_locs, i));
    }
    if (!(n.d_proc >= 0) || !std::isfinite(n.d_proc)) {
      add(ViolationCode::kNegativeProcessingDelay,
          absl::StrCat("node '", n.id, "' has processing delay ", n.d_proc),
          At(node_locs, i));
    }
  }

  std::set<std::pair<std::string, std::string>> link_keys;
  for (size_t i = 0; i < kb.links.size(); ++i) {
    const Link& l = kb.links[i];
    const std::string name = absl::StrCat(l.src, "->", l.dst);
    for (const std::string* end : {&l.src, &l.dst}) {
      if (!node_ids.contains(*end)) {
        add(ViolationCode::kDanglingReference,
            absl::StrCat("link ", name, " references undeclared node '", *end,
                         "'"),
            At(link_locs, i));
      }
    }
    if (l.src == l.dst) {
      add(ViolationCode::kSelfLoop, absl::StrCat("link ", name, " is a loop"),
          At(link_locs, i));
    }
    if (!link_keys.emplace(l.src, l.dst).second) {
      add(ViolationCode::kDuplicateLink,
          absl::StrCat("duplicate link ", name), At(link_locs, i));
    }
    if (!(l.d_prop >= 0) || !std::isfinite(l.d_prop)) {
      add(ViolationCode::kNegativePropagationDelay,
          absl::StrCat("link ", name, " has propagation delay ", l.d_prop),
          At(link_locs, i));
    }
    if (!(l.bandwidth > 0) || !std::isfinite(l.bandwidth)) {
      add(ViolationCode::kNonPositiveBandwidth,
          absl::StrCat("link ", name, " has bandwidth ", l.bandwidth),
          At(link_locs, i));
    }
    if (!InUnitInterval(l.reliability)) {
      add(ViolationCode::kReliabilityOutOfRange,
          absl::StrCat("link ", name, " has reliability ", l.reliability,
                       " outside [0, 1]"),
          At(link_locs, i));
    }
  }

  absl::flat_hash_set<std::string> flow_ids;
  for (const FlowRequest& f : kb.flows) flow_ids.insert(f.id);
  absl::flat_hash_set<std::string> seen_flows;
  for (size_t i = 0; i < kb.flows.size(); ++i) {
    const FlowRequest& f = kb.flows[i];
    const std::string loc = At(flow_locs, i);
    if (!IsValidIdentifier(f.id)) {
      add(ViolationCode::kInvalidIdentifier,
          absl::StrCat("invalid flow id '", f.id, "'"), loc);
    }
    if (!seen_flows.insert(f.id).second) {
      add(ViolationCode::kDuplicateFlow,
          absl::StrCat("duplicate flow '", f.id, "'"), loc);
    }
    for (const std::string* end : {&f.src, &f.dst}) {
      if (!node_ids.contains(*end)) {
        add(ViolationCode::kDanglingReference,
            absl::StrCat("flow '", f.id, "' references undeclared node '",
                         *end, "'"),
            loc);
      }
    }
    if (f.src == f.dst) {
      add(ViolationCode::kFlowEndpointsEqual,
          absl::StrCat("flow '", f.id, "' has identical endpoints"), loc);
    }
    if (!(f.pkt_size > 0) || !std::isfinite(f.pkt_size)) {
      add(ViolationCode::kNonPositivePacketSize,
          absl::StrCat("flow '", f.id, "' has packet size ", f.pkt_size), loc);
    }
    if (f.burst_size < 1) {
      add(ViolationCode::kNonPositiveBurstSize,
          absl::StrCat("flow '", f.id, "' has burst size ", f.burst_size), loc);
    }
    if (!(f.rate > 0) || !std::isfinite(f.rate)) {
      add(ViolationCode::kNonPositiveRate,
          absl::StrCat("flow '", f.id, "' has rate ", f.rate), loc);
    }
    if (!(f.tolerance >= 0 && f.tolerance <= f.latency_budget) ||
        !std::isfinite(f.latency_budget)) {
      add(ViolationCode::kToleranceOutOfRange,
          absl::StrCat("flow '", f.id, "' has tolerance ", f.tolerance,
                       " outside [0, ", f.latency_budget, "]"),
          loc);
    }
    if (!InUnitInterval(f.req_rel)) {
      add(ViolationCode::kRequiredReliabilityOutOfRange,
          absl::StrCat("flow '", f.id, "' requires reliability ", f.req_rel,
                       " outside [0, 1]"),
          loc);
    }
    if (f.replica_factor < 1) {
      add(ViolationCode::kNonPositiveReplicaFactor,
          absl::StrCat("flow '", f.id, "' has replica factor ",
                       f.replica_factor),
          loc);
    }
    for (const std::string& other : f.anti_affinity) {
      if (other == f.id) {
        add(ViolationCode::kSelfAntiAffinity,
            absl::StrCat("flow '", f.id, "' lists itself in antiAffinity"),
            loc);
      } else if (!flow_ids.contains(other)) {
        add(ViolationCode::kDanglingReference,
            absl::StrCat("flow '", f.id, "' avoids undeclared flow '", other,
                         "'"),
            loc);
      }
    }
  }

  absl::flat_hash_set<std::string> cand_ids;
  for (size_t i = 0; i < kb.candidates.size(); ++i) {
    const CandidateFact& c = kb.candidates[i];
    const std::string loc = At(cand_locs, i);
    if (!cand_ids.insert(c.id).second) {
      add(ViolationCode::kDuplicateCandidate,
          absl::StrCat("duplicate candidate '", c.id, "'"), loc);
    }
    bool dangling = false;
    for (const std::string* end : {&c.src, &c.dst}) {
      if (!node_ids.contains(*end)) {
        dangling = true;
        add(ViolationCode::kDanglingReference,
            absl::StrCat("candidate '", c.id, "' references undeclared node '",
                         *end, "'"),
            loc);
      }
    }
    for (const std::string& n : c.nodes) {
      if (!node_ids.contains(n)) {
        dangling = true;
        add(ViolationCode::kDanglingReference,
            absl::StrCat("candidate '", c.id, "' traverses undeclared node '",
                         n, "'"),
            loc);
      }
    }
    if (dangling) continue;
    std::string problem;
    if (c.nodes.size() < 2) {
      problem = "has fewer than two nodes";
    } else if (c.nodes.front() != c.src || c.nodes.back() != c.dst) {
      problem = "does not start at its source and end at its destination";
    } else {
      std::set<std::string> seen;
      for (size_t k = 0; k < c.nodes.size() && problem.empty(); ++k) {
        if (!seen.insert(c.nodes[k]).second) {
          problem = absl::StrCat("repeats node '", c.nodes[k], "'");
        } else if (k + 1 < c.nodes.size() &&
                   !link_keys.contains({c.nodes[k], c.nodes[k + 1]})) {
          problem = absl::StrCat("uses missing link ", c.nodes[k], "->",
                                 c.nodes[k + 1]);
        }
      }
    }
    if (!problem.empty()) {
      add(ViolationCode::kInvalidCandidate,
          absl::StrCat("candidate '", c.id, "' ", problem), loc);
    }
  }
  return out;
}

}  // namespace internal

std::vector<Violation> ValidateKb(const KnowledgeBase& kb) {
  return internal::ValidateKbWithLocations(kb, nullptr);
}

void NormalizeKb(KnowledgeBase& kb) {
  absl::flat_hash_map<std::string, size_t> index;
  for (size_t i = 0; i < kb.flows.size(); ++i) index.emplace(kb.flows[i].id, i);
  std::vector<std::pair<size_t, std::string>> additions;
  for (const FlowRequest& f : kb.flows) {
    for (const std::string& other : f.anti_affinity) {
      if (auto it = index.find(other); it != index.end() && other != f.id) {
        additions.emplace_back(it->second, f.id);
      }
    }
  }
  for (auto& [i, id] : additions) kb.flows[i].anti_affinity.insert(id);
}

namespace {

absl::Status ViolationsToStatus(const std::vector<Violation>& violations) {
  std::vector<std::string> lines;
  lines.reserve(violations.size());
  for (const Violation& v : violations) {
    lines.push_back(absl::StrCat(v.location.empty() ? "" : v.location + ": ",
                                 ViolationCodeName(v.code), ": ", v.message));
  }
  return absl::InvalidArgumentError(absl::StrJoin(lines, "\n"));
}

bool LooksLikeJson(absl::string_view text) {
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
    return c == '{';
  }
  return false;
}

absl::StatusOr<KnowledgeBase> Finish(const RawFacts& raw) {
  KbLocations locations;
  std::vector<Violation> violations;
  KnowledgeBase kb = internal::Assemble(raw, locations, violations);
  std::vector<Violation> more =
      internal::ValidateKbWithLocations(kb, &locations);
  violations.insert(violations.end(), more.begin(), more.end());
  if (!violations.empty()) return ViolationsToStatus(violations);
  NormalizeKb(kb);
  return kb;
}

}  // namespace

absl::StatusOr<KnowledgeBase> ParseKb(absl::string_view text) {
  RawFacts raw;
  if (absl::Status s = internal::ParseFactsInto("<input>", text, raw);
      !s.ok()) {
    return s;
  }
  return Finish(raw);
}

absl::StatusOr<KnowledgeBase> ParseKbJson(absl::string_view text) {
  RawFacts raw;
  if (absl::Status s = internal::ParseJsonInto("<input>", text, raw);
      !s.ok()) {
    return s;
  }
  return Finish(raw);
}

absl::StatusOr<KnowledgeBase> ParseKbAuto(absl::string_view text) {
  return LooksLikeJson(text) ? ParseKbJson(text) : ParseKb(text);
}

absl::StatusOr<KnowledgeBase> ParseKbDocuments(
    const std::vector<SourceDocument>& documents) {
  RawFacts raw;
  for (const SourceDocument& doc : documents) {
    absl::Status s = LooksLikeJson(doc.text)
                         ? internal::ParseJsonInto(doc.name, doc.text, raw)
                         : internal::ParseFactsInto(doc.name, doc.text, raw);
    if (!s.ok()) return s;
  }
  return Finish(raw);
}

absl::StatusOr<KnowledgeBase> LoadKbFiles(
    const std::vector<std::string>& paths) {
  std::vector<SourceDocument> docs;
  for (const std::string& path : paths) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return absl::NotFoundError(absl::StrCat(path, ": cannot open"));
    std::ostringstream buffer;
    buffer << in.rdbuf();
    docs.push_back({path, buffer.str()});
  }
  return ParseKbDocuments(docs);
}

std::string ToFacts(const KnowledgeBase& kb) {
  std::string out;
  for (const Node& n : kb.nodes) {
    absl::StrAppend(&out, "node(", n.id, ", ", FormatNumber(n.d_proc), ").\n");
  }
  for (const Link& l : kb.links) {
    absl::StrAppend(&out, "link(", l.src, ", ", l.dst, ", ",
                    FormatNumber(l.d_prop), ", ", FormatNumber(l.bandwidth),
                    ", ", FormatNumber(l.reliability), ").\n");
  }
  for (const FlowRequest& f : kb.flows) {
    absl::StrAppend(&out, "flow(", f.id, ", ", f.src, ", ", f.dst, ").\n");
    absl::StrAppend(&out, "flowReqs(", f.id, ", ", FormatNumber(f.pkt_size),
                    ", ", f.burst_size, ", ", FormatNumber(f.rate), ", ",
                    FormatNumber(f.latency_budget), ", ",
                    FormatNumber(f.tolerance), ").\n");
    absl::StrAppend(&out, "reliabilityReqs(", f.id, ", ",
                    FormatNumber(f.req_rel), ", ", f.replica_factor, ").\n");
    if (!f.anti_affinity.empty()) {
      absl::StrAppend(&out, "antiAffinity(", f.id, ", [",
                      absl::StrJoin(f.anti_affinity, ", "), "]).\n");
    }
  }
  for (const CandidateFact& c : kb.candidates) {
    absl::StrAppend(&out, "candidate(", c.id, ", ", c.src, ", ", c.dst, ", [",
                    absl::StrJoin(c.nodes, ", "), "]).\n");
  }
  return out;
}

std::string ToJson(const KnowledgeBase& kb) {
  using nlohmann::json;
  json doc = json::object();
  doc["nodes"] = json::array();
  for (const Node& n : kb.nodes) {
    doc["nodes"].push_back({{"id", n.id}, {"d_proc", n.d_proc}});
  }
  doc["links"] = json::array();
  for (const Link& l : kb.links) {
    doc["links"].push_back({{"src", l.src},
                            {"dst", l.dst},
                            {"d_prop", l.d_prop},
                            {"bandwidth", l.bandwidth},
                            {"reliability", l.reliability}});
  }
  doc["flows"] = json::array();
  for (const FlowRequest& f : kb.flows) {
    doc["flows"].push_back({{"id", f.id},
                            {"src", f.src},
                            {"dst", f.dst},
                            {"pkt_size", f.pkt_size},
                            {"burst_size", f.burst_size},
                            {"rate", f.rate},
                            {"latency_budget", f.latency_budget},
                            {"tolerance", f.tolerance},
                            {"req_rel", f.req_rel},
                            {"replica_factor", f.replica_factor},
                            {"anti_affinity", f.anti_affinity}});
  }
  doc["candidates"] = json::array();
  for (const CandidateFact& c : kb.candidates) {
    doc["candidates"].push_back(
        {{"id", c.id}, {"src", c.src}, {"dst", c.dst}, {"nodes", c.nodes}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace dglbf
