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

#ifndef DGLBF_NETWORK_H_
#define DGLBF_NETWORK_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/strings/string_view.h"
#include "dglbf/kb.h"

namespace dglbf {

using NodeIndex = int32_t;
using LinkIndex = int32_t;

// Indexed, read-only view of a knowledge base's topology. Out-neighbours are
// kept sorted by node id so depth-first walks visit paths in lexicographic
// order. Built from a validated KnowledgeBase.
class Network {
 public:
  struct Arc {
    NodeIndex to;
    LinkIndex link;
  };

  explicit Network(const KnowledgeBase& kb);

  size_t node_count() const { return node_ids_.size(); }
  size_t link_count() const { return links_.size(); }

  std::optional<NodeIndex> FindNode(absl::string_view id) const;
  std::optional<LinkIndex> FindLink(NodeIndex src, NodeIndex dst) const;

  const std::string& node_id(NodeIndex n) const { return node_ids_[n]; }
  double d_proc(NodeIndex n) const { return d_proc_[n]; }
  const Link& link(LinkIndex l) const { return links_[l]; }
  NodeIndex link_src(LinkIndex l) const { return link_ends_[l].first; }
  NodeIndex link_dst(LinkIndex l) const { return link_ends_[l].second; }
  std::span<const Arc> out_arcs(NodeIndex n) const { return out_[n]; }
  std::span<const Arc> in_arcs(NodeIndex n) const { return in_[n]; }

  // Hop distances to `dst` over reversed links; -1 when unreachable.
  std::vector<int> HopsTo(NodeIndex dst) const;

  // Resolves a node-id sequence into link indices; nullopt if a node or link
  // is missing.
  std::optional<std::vector<LinkIndex>> ResolvePath(
      std::span<const std::string> nodes) const;

 private:
  static uint64_t Key(NodeIndex a, NodeIndex b) {
    return (static_cast<uint64_t>(static_cast<uint32_t>(a)) << 32) |
           static_cast<uint32_t>(b);
  }

  std::vector<std::string> node_ids_;
  std::vector<double> d_proc_;
  absl::flat_hash_map<std::string, NodeIndex> node_index_;
  std::vector<Link> links_;
  std::vector<std::pair<NodeIndex, NodeIndex>> link_ends_;
  absl::flat_hash_map<uint64_t, LinkIndex> link_index_;
  std::vector<std::vector<Arc>> out_;
  std::vector<std::vector<Arc>> in_;
};

}  // namespace dglbf

#endif  // DGLBF_NETWORK_H_
