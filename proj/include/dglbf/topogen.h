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
// Random infrastructures (Barabasi-Albert, Erdos-Renyi), random flow batches,
// and the bundled Orion CEV dataset.

#ifndef DGLBF_TOPOGEN_H_
#define DGLBF_TOPOGEN_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "dglbf/kb.h"

namespace dglbf {

enum class GraphModel { kBarabasiAlbert, kErdosRenyi };

absl::string_view GraphModelName(GraphModel model);  // "ba" / "er"
absl::StatusOr<GraphModel> ParseGraphModel(absl::string_view text);

struct Range {
  double lo = 0;
  double hi = 0;
};

struct AttributeRanges {
  Range d_proc{1, 5};         // ms, two decimals
  Range d_prop{1, 5};         // ms, two decimals
  Range bandwidth{500, 1500};  // Mbps, integral
  Range reliability{0.99, 0.9999};  // four decimals
};

struct GenSpec {
  GraphModel model = GraphModel::kBarabasiAlbert;
  int node_exponent = 4;  // 2^i nodes
  // Edges attached per new BA node; defaults to node_exponent.
  std::optional<int> ba_degree;
  double er_prob = 0.7;
  uint64_t seed = 1;
  AttributeRanges attributes;

  int node_count() const { return 1 << node_exponent; }
  int attachment() const { return ba_degree.value_or(node_exponent); }
  // False outside the studied grid (4 <= i <= 10).
  bool paper_parameters() const {
    return node_exponent >= 4 && node_exponent <= 10;
  }
};

// Nodes and links only. Each undirected generator edge becomes two directed
// links with independently drawn attributes. Disconnected draws are retried
// with derived seeds, up to 16 attempts.
absl::StatusOr<KnowledgeBase> GenTopology(const GenSpec& spec);

struct FlowGenSpec {
  int count = 500;
  double protection_prob = 0.25;
  // Defaults to floor(log2(count)).
  std::optional<int> anti_affinity_pairs;
  double pkt_size = 0.008;  // Mb
  int burst_size = 3;
  Range rate{2, 8};           // Mbps
  Range latency_budget{30, 60};  // ms
  Range tolerance{10, 20};       // ms
  Range req_rel{0, 0};
  uint64_t seed = 1;
  // Id of the first generated flow is "f<first_index>".
  int first_index = 1;
};

int DefaultAntiAffinityPairs(int count);

// Random endpoints (src != dst) drawn uniformly among kb.nodes.
absl::StatusOr<std::vector<FlowRequest>> GenFlows(const KnowledgeBase& kb,
                                                  const FlowGenSpec& spec);

// Directory holding the bundled datasets: $DGLBF_DATA_DIR if set, otherwise
// the source tree's data/ directory.
std::string DefaultDataDir();

// data/cev/topology.pl: 46 nodes, 110 directed links.
absl::StatusOr<KnowledgeBase> LoadCev(const std::string& data_dir = DefaultDataDir());

// Topology plus data/cev/flows.pl, the three-flow example.
absl::StatusOr<KnowledgeBase> LoadCevExample(
    const std::string& data_dir = DefaultDataDir());

// A CEV flow batch of `count` flows (count >= 4): the three example flows, a
// second protected flow, then random flows with req_rel in [0.8, 0.9].
absl::StatusOr<KnowledgeBase> GenCevBatch(int count, uint64_t seed,
                                          const std::string& data_dir = DefaultDataDir());

}  // namespace dglbf

#endif  // DGLBF_TOPOGEN_H_
