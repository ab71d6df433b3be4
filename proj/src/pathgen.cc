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

#include "dglbf/pathgen.h"

#include <algorithm>
#include <atomic>
#include <limits>
#include <set>
#include <thread>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

namespace dglbf {
namespace {

// Depth-first walk emitting the simple paths of exactly `target_hops` hops in
// lexicographic order. `hops_to_dst` prunes branches that cannot reach the
// destination in the remaining hop budget.
class FixedLengthWalker {
 public:
  FixedLengthWalker(const Network& net, NodeIndex dst,
                    const std::vector<int>& hops_to_dst, size_t limit,
                    std::vector<std::vector<NodeIndex>>& out)
      : net_(net),
        dst_(dst),
        hops_to_dst_(hops_to_dst),
        limit_(limit),
        out_(out),
        on_path_(net.node_count(), false) {}

  void Run(NodeIndex src, int target_hops) {
    target_ = target_hops;
    path_.assign(1, src);
    on_path_[src] = true;
    Visit(src);
    on_path_[src] = false;
  }

 private:
  void Visit(NodeIndex v) {
    if (out_.size() >= limit_) return;
    const int depth = static_cast<int>(path_.size()) - 1;
    if (depth == target_) {
      if (v == dst_) out_.push_back(path_);
      return;
    }
    const int remaining = target_ - depth - 1;
    for (const Network::Arc& arc : net_.out_arcs(v)) {
      const NodeIndex w = arc.to;
      if (on_path_[w]) continue;
      if (w == dst_ && remaining != 0) continue;
      const int need = hops_to_dst_[w];
      if (need < 0 || need > remaining) continue;
      on_path_[w] = true;
      path_.push_back(w);
      Visit(w);
      path_.pop_back();
      on_path_[w] = false;
      if (out_.size() >= limit_) return;
    }
  }

  const Network& net_;
  NodeIndex dst_;
  const std::vector<int>& hops_to_dst_;
  size_t limit_;
  std::vector<std::vector<NodeIndex>>& out_;
  std::vector<bool> on_path_;
  std::vector<NodeIndex> path_;
  int target_ = 0;
};

// `hops` is network.HopsTo(d).
std::vector<CandidatePath> Enumerate(const Network& network, NodeIndex s,
                                     NodeIndex d, const std::vector<int>& hops,
                                     const EnumerationLimits& limits) {
  std::vector<CandidatePath> out;
  if (s == d) return out;
  const std::string& src = network.node_id(s);
  const std::string& dst = network.node_id(d);
  const int shortest = hops[s];
  if (shortest < 0) return out;

  int max_hops = static_cast<int>(network.node_count()) - 1;
  if (limits.max_hops) max_hops = std::min(max_hops, *limits.max_hops);
  if (limits.hop_slack) max_hops = std::min(max_hops, shortest + *limits.hop_slack);
  const size_t limit = limits.max_candidates_per_pair
                           ? static_cast<size_t>(*limits.max_candidates_per_pair)
                           : std::numeric_limits<size_t>::max();

  std::vector<std::vector<NodeIndex>> paths;
  FixedLengthWalker walker(network, d, hops, limit, paths);
  for (int h = shortest; h <= max_hops && paths.size() < limit; ++h) {
    walker.Run(s, h);
  }

  out.reserve(paths.size());
  for (size_t i = 0; i < paths.size(); ++i) {
    CandidatePath c;
    c.id = absl::StrCat("p_", src, "_", dst, "_", i + 1);
    c.src = src;
    c.dst = dst;
    c.nodes.reserve(paths[i].size());
    for (NodeIndex n : paths[i]) c.nodes.push_back(network.node_id(n));
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

std::vector<CandidatePath> EnumerateCandidates(
    const Network& network, const std::string& src, const std::string& dst,
    const EnumerationLimits& limits) {
  auto s = network.FindNode(src);
  auto d = network.FindNode(dst);
  if (!s || !d || *s == *d) return {};
  return Enumerate(network, *s, *d, network.HopsTo(*d), limits);
}

std::vector<CandidatePath> EnumerateCandidates(
    const KnowledgeBase& kb, const std::string& src, const std::string& dst,
    const EnumerationLimits& limits) {
  return EnumerateCandidates(Network(kb), src, dst, limits);
}

CandidateIndex BuildCandidateIndex(const KnowledgeBase& kb,
                                   const Network& network,
                                   std::span<const FlowRequest> flows,
                                   const EnumerationLimits& limits,
                                   int parallelism) {
  CandidateIndex index;
  for (const FlowRequest& f : flows) index.try_emplace({f.src, f.dst});

  std::set<EndpointPair> supplied;
  for (const CandidateFact& c : kb.candidates) {
    auto it = index.find({c.src, c.dst});
    if (it == index.end()) continue;
    supplied.insert(it->first);
    it->second.push_back({c.id, c.src, c.dst, c.nodes});
  }

  // Pairs grouped by destination share one reverse BFS.
  std::map<std::string, std::vector<CandidateIndex::iterator>> by_dst;
  for (auto it = index.begin(); it != index.end(); ++it) {
    if (!supplied.contains(it->first)) by_dst[it->first.second].push_back(it);
  }
  std::vector<const std::vector<CandidateIndex::iterator>*> todo;
  for (const auto& [dst, pairs] : by_dst) todo.push_back(&pairs);
  auto work = [&](size_t i) {
    const std::vector<CandidateIndex::iterator>& pairs = *todo[i];
    auto d = network.FindNode(pairs.front()->first.second);
    if (!d) return;
    const std::vector<int> hops = network.HopsTo(*d);
    for (CandidateIndex::iterator it : pairs) {
      if (auto s = network.FindNode(it->first.first)) {
        it->second = Enumerate(network, *s, *d, hops, limits);
      }
    }
  };
  if (parallelism <= 1 || todo.size() < 2) {
    for (size_t i = 0; i < todo.size(); ++i) work(i);
    return index;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> workers;
  const size_t width = std::min<size_t>(parallelism, todo.size());
  for (size_t t = 0; t < width; ++t) {
    workers.emplace_back([&] {
      for (size_t i = next++; i < todo.size(); i = next++) work(i);
    });
  }
  for (std::thread& w : workers) w.join();
  return index;
}

CandidateIndex BuildCandidateIndex(const KnowledgeBase& kb,
                                   const Network& network,
                                   const EnumerationLimits& limits) {
  return BuildCandidateIndex(kb, network, kb.flows, limits);
}

std::string CandidatesToFacts(std::span<const CandidatePath> candidates) {
  std::string out;
  for (const CandidatePath& c : candidates) {
    absl::StrAppend(&out, "candidate(", c.id, ", ", c.src, ", ", c.dst, ", [",
                    absl::StrJoin(c.nodes, ", "), "]).\n");
  }
  return out;
}

}  // namespace dglbf
