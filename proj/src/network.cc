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

#include "dglbf/network.h"

#include <algorithm>
#include <deque>

namespace dglbf {

Network::Network(const KnowledgeBase& kb) {
  node_ids_.reserve(kb.nodes.size());
  d_proc_.reserve(kb.nodes.size());
  for (const Node& n : kb.nodes) {
    node_index_.emplace(n.id, static_cast<NodeIndex>(node_ids_.size()));
    node_ids_.push_back(n.id);
    d_proc_.push_back(n.d_proc);
  }
  out_.resize(node_ids_.size());
  in_.resize(node_ids_.size());
  links_.reserve(kb.links.size());
  for (const Link& l : kb.links) {
    const NodeIndex s = node_index_.at(l.src);
    const NodeIndex d = node_index_.at(l.dst);
    const auto idx = static_cast<LinkIndex>(links_.size());
    links_.push_back(l);
    link_ends_.emplace_back(s, d);
    link_index_.emplace(Key(s, d), idx);
    out_[s].push_back({d, idx});
    in_[d].push_back({s, idx});
  }
  auto by_id = [this](const Arc& a, const Arc& b) {
    return node_ids_[a.to] < node_ids_[b.to];
  };
  for (auto& arcs : out_) std::sort(arcs.begin(), arcs.end(), by_id);
  for (auto& arcs : in_) std::sort(arcs.begin(), arcs.end(), by_id);
}

std::optional<NodeIndex> Network::FindNode(absl::string_view id) const {
  auto it = node_index_.find(id);
  if (it == node_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<LinkIndex> Network::FindLink(NodeIndex src, NodeIndex dst) const {
  auto it = link_index_.find(Key(src, dst));
  if (it == link_index_.end()) return std::nullopt;
  return it->second;
}

std::vector<int> Network::HopsTo(NodeIndex dst) const {
  std::vector<int> dist(node_ids_.size(), -1);
  std::deque<NodeIndex> queue;
  dist[dst] = 0;
  queue.push_back(dst);
  while (!queue.empty()) {
    const NodeIndex v = queue.front();
    queue.pop_front();
    for (const Arc& a : in_[v]) {
      if (dist[a.to] < 0) {
        dist[a.to] = dist[v] + 1;
        queue.push_back(a.to);
      }
    }
  }
  return dist;
}

std::optional<std::vector<LinkIndex>> Network::ResolvePath(
    std::span<const std::string> nodes) const {
  std::vector<LinkIndex> out;
  if (nodes.size() < 2) return std::nullopt;
  out.reserve(nodes.size() - 1);
  for (size_t i = 0; i + 1 < nodes.size(); ++i) {
    auto a = FindNode(nodes[i]);
    auto b = FindNode(nodes[i + 1]);
    if (!a || !b) return std::nullopt;
    auto l = FindLink(*a, *b);
    if (!l) return std::nullopt;
    out.push_back(*l);
  }
  return out;
}

}  // namespace dglbf
