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

#include "dglbf/topogen.h"

#include <cmath>
#include <cstdlib>
#include <deque>
#include <set>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "dglbf/rng.h"

#ifndef DGLBF_DATA_DIR
#define DGLBF_DATA_DIR "data"
#endif

namespace dglbf {
namespace {

constexpr int kMaxAttempts = 16;

double RoundTo(double x, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(x * scale) / scale;
}

double Draw(Rng& rng, const Range& r, int decimals) {
  return RoundTo(rng.Uniform(r.lo, r.hi), decimals);
}

std::string NodeId(int i, int n) {
  const int width = std::max<int>(4, std::to_string(n - 1).size());
  std::string digits = std::to_string(i);
  return absl::StrCat("n", std::string(width - digits.size(), '0'), digits);
}

using Edge = std::pair<int, int>;

std::vector<Edge> BarabasiAlbert(int n, int m, Rng& rng) {
  std::vector<Edge> edges;
  std::vector<int> ends;  // each node repeated once per incident edge
  for (int u = 0; u <= m && u < n; ++u) {
    for (int v = u + 1; v <= m && v < n; ++v) {
      edges.emplace_back(u, v);
      ends.push_back(u);
      ends.push_back(v);
    }
  }
  for (int v = m + 1; v < n; ++v) {
    std::set<int> targets;
    while (static_cast<int>(targets.size()) < m) {
      targets.insert(ends[rng.Below(ends.size())]);
    }
    for (int t : targets) {
      edges.emplace_back(t, v);
      ends.push_back(t);
      ends.push_back(v);
    }
  }
  return edges;
}

std::vector<Edge> ErdosRenyi(int n, double p, Rng& rng) {
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (rng.Bernoulli(p)) edges.emplace_back(u, v);
    }
  }
  return edges;
}

bool Connected(int n, const std::vector<Edge>& edges) {
  if (n <= 1) return true;
  std::vector<std::vector<int>> adj(n);
  for (auto [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<bool> seen(n, false);
  std::deque<int> queue{0};
  seen[0] = true;
  int count = 1;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++count;
        queue.push_back(v);
      }
    }
  }
  return count == n;
}

Link DrawLink(std::string src, std::string dst, const AttributeRanges& a,
              Rng& rng) {
  Link l;
  l.src = std::move(src);
  l.dst = std::move(dst);
  l.d_prop = Draw(rng, a.d_prop, 2);
  l.bandwidth = Draw(rng, a.bandwidth, 0);
  l.reliability = Draw(rng, a.reliability, 4);
  return l;
}

}  // namespace

absl::string_view GraphModelName(GraphModel model) {
  return model == GraphModel::kErdosRenyi ? "er" : "ba";
}

absl::StatusOr<GraphModel> ParseGraphModel(absl::string_view text) {
  if (text == "ba" || text == "BA") return GraphModel::kBarabasiAlbert;
  if (text == "er" || text == "ER") return GraphModel::kErdosRenyi;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown graph model '", text, "' (expected ba or er)"));
}

absl::StatusOr<KnowledgeBase> GenTopology(const GenSpec& spec) {
  if (spec.node_exponent < 1 || spec.node_exponent > 20) {
    return absl::InvalidArgumentError("node exponent must be in [1, 20]");
  }
  const int n = spec.node_count();
  const int m = spec.attachment();
  if (spec.model == GraphModel::kBarabasiAlbert && (m < 1 || m >= n)) {
    return absl::InvalidArgumentError(
        absl::StrCat("BA attachment ", m, " needs 1 <= m < ", n));
  }
  if (spec.model == GraphModel::kErdosRenyi &&
      !(spec.er_prob > 0 && spec.er_prob <= 1)) {
    return absl::InvalidArgumentError("ER probability must be in (0, 1]");
  }

  std::vector<Edge> edges;
  uint64_t seed = spec.seed;
  bool connected = false;
  for (int attempt = 0; attempt < kMaxAttempts && !connected; ++attempt) {
    if (attempt > 0) seed = MixSeed(spec.seed, attempt);
    Rng rng(MixSeed(seed, 1));
    edges = spec.model == GraphModel::kBarabasiAlbert
                ? BarabasiAlbert(n, m, rng)
                : ErdosRenyi(n, spec.er_prob, rng);
    connected = Connected(n, edges);
  }
  if (!connected) {
    return absl::FailedPreconditionError(absl::StrCat(
        "no connected graph after ", kMaxAttempts, " attempts"));
  }

  KnowledgeBase kb;
  Rng attr(MixSeed(seed, 2));
  kb.nodes.reserve(n);
  for (int i = 0; i < n; ++i) {
    kb.nodes.push_back({NodeId(i, n), Draw(attr, spec.attributes.d_proc, 2)});
  }
  kb.links.reserve(2 * edges.size());
  for (auto [u, v] : edges) {
    kb.links.push_back(
        DrawLink(kb.nodes[u].id, kb.nodes[v].id, spec.attributes, attr));
    kb.links.push_back(
        DrawLink(kb.nodes[v].id, kb.nodes[u].id, spec.attributes, attr));
  }
  return kb;
}

int DefaultAntiAffinityPairs(int count) {
  if (count < 2) return 0;
  return static_cast<int>(std::floor(std::log2(static_cast<double>(count))));
}

absl::StatusOr<std::vector<FlowRequest>> GenFlows(const KnowledgeBase& kb,
                                                  const FlowGenSpec& spec) {
  if (kb.nodes.size() < 2) {
    return absl::InvalidArgumentError("flow generation needs at least 2 nodes");
  }
  if (spec.count < 0) return absl::InvalidArgumentError("negative flow count");
  if (!(spec.protection_prob >= 0 && spec.protection_prob <= 1)) {
    return absl::InvalidArgumentError("protection probability must be in [0, 1]");
  }
  Rng rng(spec.seed);
  const uint64_t n = kb.nodes.size();
  std::vector<FlowRequest> flows;
  flows.reserve(spec.count);
  for (int i = 0; i < spec.count; ++i) {
    FlowRequest f;
    f.id = absl::StrCat("f", spec.first_index + i);
    const uint64_t s = rng.Below(n);
    uint64_t d = rng.Below(n - 1);
    if (d >= s) ++d;
    f.src = kb.nodes[s].id;
    f.dst = kb.nodes[d].id;
    f.pkt_size = spec.pkt_size;
    f.burst_size = spec.burst_size;
    f.rate = Draw(rng, spec.rate, 2);
    f.latency_budget = Draw(rng, spec.latency_budget, 2);
    f.tolerance = std::min(Draw(rng, spec.tolerance, 2), f.latency_budget);
    f.req_rel = Draw(rng, spec.req_rel, 4);
    f.replica_factor = rng.Bernoulli(spec.protection_prob) ? 2 : 1;
    flows.push_back(std::move(f));
  }

  const int64_t max_pairs =
      static_cast<int64_t>(spec.count) * (spec.count - 1) / 2;
  const int64_t pairs = std::min<int64_t>(
      spec.anti_affinity_pairs.value_or(DefaultAntiAffinityPairs(spec.count)),
      max_pairs);
  std::set<std::pair<int, int>> chosen;
  while (static_cast<int64_t>(chosen.size()) < pairs) {
    int a = static_cast<int>(rng.Below(spec.count));
    int b = static_cast<int>(rng.Below(spec.count - 1));
    if (b >= a) ++b;
    if (a > b) std::swap(a, b);
    if (!chosen.insert({a, b}).second) continue;
    flows[a].anti_affinity.insert(flows[b].id);
    flows[b].anti_affinity.insert(flows[a].id);
  }
  return flows;
}

std::string DefaultDataDir() {
  if (const char* env = std::getenv("DGLBF_DATA_DIR"); env && *env) return env;
  return DGLBF_DATA_DIR;
}

absl::StatusOr<KnowledgeBase> LoadCev(const std::string& data_dir) {
  return LoadKbFiles({absl::StrCat(data_dir, "/cev/topology.pl")});
}

absl::StatusOr<KnowledgeBase> LoadCevExample(const std::string& data_dir) {
  return LoadKbFiles({absl::StrCat(data_dir, "/cev/topology.pl"),
                      absl::StrCat(data_dir, "/cev/flows.pl")});
}

absl::StatusOr<KnowledgeBase> GenCevBatch(int count, uint64_t seed,
                                          const std::string& data_dir) {
  if (count < 4) return absl::InvalidArgumentError("CEV batches need >= 4 flows");
  auto kb = LoadCevExample(data_dir);
  if (!kb.ok()) return kb.status();

  FlowRequest f4;
  f4.id = "f4";
  f4.src = "ns6";
  f4.dst = "ns12";
  f4.pkt_size = 0.01;
  f4.burst_size = 4;
  f4.rate = 10;
  f4.latency_budget = 100;
  f4.tolerance = 10;
  f4.req_rel = 0.85;
  f4.replica_factor = 2;
  kb->flows.push_back(std::move(f4));

  FlowGenSpec spec;
  spec.count = count - static_cast<int>(kb->flows.size());
  spec.protection_prob = 0;
  spec.anti_affinity_pairs = 0;
  spec.req_rel = {0.8, 0.9};
  spec.seed = seed;
  spec.first_index = static_cast<int>(kb->flows.size()) + 1;
  auto extra = GenFlows(*kb, spec);
  if (!extra.ok()) return extra.status();
  for (FlowRequest& f : *extra) kb->flows.push_back(std::move(f));
  return kb;
}

}  // namespace dglbf
