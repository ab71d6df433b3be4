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

#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "nlohmann/json.hpp"
#include "raw_facts.h"

namespace dglbf::internal {
namespace {

using nlohmann::json;

class JsonReader {
 public:
  explicit JsonReader(absl::string_view source) : source_(source) {}

  absl::Status Run(const json& doc, RawFacts& out) {
    if (!doc.is_object()) return Error("", "top level must be an object");
    for (const auto& [key, value] : doc.items()) {
      if (key != "nodes" && key != "links" && key != "flows" &&
          key != "candidates") {
        return Error("", absl::StrCat("unknown key '", key, "'"));
      }
      if (!value.is_array()) return Error(key, "must be an array");
    }
    absl::Status s;
    if (s = Each(doc, "nodes", [&](const json& e, const std::string& where) {
          return ReadNode(e, where, out);
        });
        !s.ok()) {
      return s;
    }
    if (s = Each(doc, "links", [&](const json& e, const std::string& where) {
          return ReadLink(e, where, out);
        });
        !s.ok()) {
      return s;
    }
    if (s = Each(doc, "flows", [&](const json& e, const std::string& where) {
          return ReadFlow(e, where, out);
        });
        !s.ok()) {
      return s;
    }
    return Each(doc, "candidates",
                [&](const json& e, const std::string& where) {
                  return ReadCandidate(e, where, out);
                });
  }

 private:
  template <typename Fn>
  absl::Status Each(const json& doc, const char* key, Fn&& fn) {
    if (!doc.contains(key)) return absl::OkStatus();
    const json& arr = doc.at(key);
    for (size_t i = 0; i < arr.size(); ++i) {
      const std::string where = absl::StrCat(key, "[", i, "]");
      if (!arr[i].is_object()) return Error(where, "must be an object");
      if (absl::Status s = fn(arr[i], where); !s.ok()) return s;
    }
    return absl::OkStatus();
  }

  absl::Status Error(absl::string_view where, absl::string_view message) const {
    return absl::InvalidArgumentError(
        absl::StrCat(source_, where.empty() ? "" : ":", where, ": ", message));
  }

  std::string Location(absl::string_view where) const {
    return absl::StrCat(source_, ":", where);
  }

  absl::Status Str(const json& e, const std::string& where, const char* key,
                   std::string& out) {
    if (!e.contains(key)) return Error(where, absl::StrCat("missing '", key, "'"));
    if (!e.at(key).is_string()) {
      return Error(where, absl::StrCat("'", key, "' must be a string"));
    }
    out = e.at(key).get<std::string>();
    return absl::OkStatus();
  }

  absl::Status Num(const json& e, const std::string& where, const char* key,
                   double& out) {
    if (!e.contains(key)) return Error(where, absl::StrCat("missing '", key, "'"));
    if (!e.at(key).is_number()) {
      return Error(where, absl::StrCat("'", key, "' must be a number"));
    }
    out = e.at(key).get<double>();
    return absl::OkStatus();
  }

  absl::Status Int(const json& e, const std::string& where, const char* key,
                   int& out) {
    if (!e.contains(key)) return Error(where, absl::StrCat("missing '", key, "'"));
    if (!e.at(key).is_number_integer()) {
      return Error(where, absl::StrCat("'", key, "' must be an integer"));
    }
    out = e.at(key).get<int>();
    return absl::OkStatus();
  }

  absl::Status StrList(const json& e, const std::string& where,
                       const char* key, std::vector<std::string>& out) {
    if (!e.contains(key)) return Error(where, absl::StrCat("missing '", key, "'"));
    const json& arr = e.at(key);
    if (!arr.is_array()) {
      return Error(where, absl::StrCat("'", key, "' must be an array"));
    }
    for (const json& item : arr) {
      if (!item.is_string()) {
        return Error(where, absl::StrCat("'", key, "' must hold strings"));
      }
      out.push_back(item.get<std::string>());
    }
    return absl::OkStatus();
  }

  absl::Status ReadNode(const json& e, const std::string& where,
                        RawFacts& out) {
    Node node;
    absl::Status s;
    if (s = Str(e, where, "id", node.id); !s.ok()) return s;
    if (s = Num(e, where, "d_proc", node.d_proc); !s.ok()) return s;
    out.nodes.push_back(std::move(node));
    out.node_locations.push_back(Location(where));
    return absl::OkStatus();
  }

  absl::Status ReadLink(const json& e, const std::string& where,
                        RawFacts& out) {
    Link link;
    absl::Status s;
    if (s = Str(e, where, "src", link.src); !s.ok()) return s;
    if (s = Str(e, where, "dst", link.dst); !s.ok()) return s;
    if (s = Num(e, where, "d_prop", link.d_prop); !s.ok()) return s;
    if (s = Num(e, where, "bandwidth", link.bandwidth); !s.ok()) return s;
    if (s = Num(e, where, "reliability", link.reliability); !s.ok()) return s;
    out.links.push_back(std::move(link));
    out.link_locations.push_back(Location(where));
    return absl::OkStatus();
  }

  absl::Status ReadFlow(const json& e, const std::string& where,
                        RawFacts& out) {
    RawFlow flow;
    RawFlowReqs reqs;
    absl::Status s;
    if (s = Str(e, where, "id", flow.id); !s.ok()) return s;
    if (s = Str(e, where, "src", flow.src); !s.ok()) return s;
    if (s = Str(e, where, "dst", flow.dst); !s.ok()) return s;
    flow.location = Location(where);
    reqs.flow = flow.id;
    reqs.location = flow.location;
    if (s = Num(e, where, "pkt_size", reqs.pkt_size); !s.ok()) return s;
    if (s = Int(e, where, "burst_size", reqs.burst_size); !s.ok()) return s;
    if (s = Num(e, where, "rate", reqs.rate); !s.ok()) return s;
    if (s = Num(e, where, "latency_budget", reqs.latency_budget); !s.ok()) {
      return s;
    }
    if (s = Num(e, where, "tolerance", reqs.tolerance); !s.ok()) return s;
    if (e.contains("req_rel") || e.contains("replica_factor")) {
      RawReliabilityReqs rel;
      rel.flow = flow.id;
      rel.location = flow.location;
      rel.replica_factor = 1;
      if (e.contains("req_rel")) {
        if (s = Num(e, where, "req_rel", rel.req_rel); !s.ok()) return s;
      }
      if (e.contains("replica_factor")) {
        if (s = Int(e, where, "replica_factor", rel.replica_factor); !s.ok()) {
          return s;
        }
      }
      out.reliability_reqs.push_back(std::move(rel));
    }
    if (e.contains("anti_affinity")) {
      RawAntiAffinity aa;
      aa.flow = flow.id;
      aa.location = flow.location;
      if (s = StrList(e, where, "anti_affinity", aa.avoided); !s.ok()) {
        return s;
      }
      if (!aa.avoided.empty()) out.anti_affinity.push_back(std::move(aa));
    }
    out.flows.push_back(std::move(flow));
    out.flow_reqs.push_back(std::move(reqs));
    return absl::OkStatus();
  }

  absl::Status ReadCandidate(const json& e, const std::string& where,
                             RawFacts& out) {
    CandidateFact cand;
    absl::Status s;
    if (s = Str(e, where, "id", cand.id); !s.ok()) return s;
    if (s = Str(e, where, "src", cand.src); !s.ok()) return s;
    if (s = Str(e, where, "dst", cand.dst); !s.ok()) return s;
    if (s = StrList(e, where, "nodes", cand.nodes); !s.ok()) return s;
    out.candidates.push_back(std::move(cand));
    out.candidate_locations.push_back(Location(where));
    return absl::OkStatus();
  }

  absl::string_view source_;
};

}  // namespace

absl::Status ParseJsonInto(absl::string_view source_name, absl::string_view text,
                           RawFacts& out) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    return absl::InvalidArgumentError(
        absl::StrCat(source_name, ": malformed JSON"));
  }
  RawFacts scratch = out;
  JsonReader reader(source_name);
  if (absl::Status s = reader.Run(doc, scratch); !s.ok()) return s;
  out = std::move(scratch);
  return absl::OkStatus();
}

}  // namespace dglbf::internal
