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

#include "dglbf/solver.h"

#include <algorithm>
#include <set>

#include "absl/container/flat_hash_map.h"
#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "dglbf/constraints.h"

namespace dglbf {
namespace {

using Clock = std::chrono::steady_clock;

double ElapsedMs(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since)
      .count();
}

// Queuing estimate for each allocation given link paths, per-allocation
// flows, in allocation order.
std::vector<double> QueueTimes(const Network& net,
                               const std::vector<std::vector<LinkIndex>>& links,
                               const std::vector<const FlowRequest*>& flows,
                               UnitMode mode) {
  absl::flat_hash_map<LinkIndex, std::vector<size_t>> users;
  for (size_t i = 0; i < links.size(); ++i) {
    for (LinkIndex l : links[i]) users[l].push_back(i);
  }
  const double unit = UnitScale(mode);
  std::vector<double> out(links.size(), 0.0);
  for (size_t i = 0; i < links.size(); ++i) {
    const FlowRequest& f = *flows[i];
    double total = 0;
    for (LinkIndex l : links[i]) {
      double q = (f.burst_size - 1) * f.pkt_size;
      for (size_t j : users[l]) {
        if (j == i) continue;
        q += flows[j]->burst_size * flows[j]->pkt_size;
      }
      total += q / net.link(l).bandwidth;
    }
    out[i] = total * unit;
  }
  return out;
}

struct ResolvedAllocations {
  std::vector<std::vector<LinkIndex>> links;
  std::vector<const FlowRequest*> flows;
};

absl::StatusOr<ResolvedAllocations> Resolve(
    const KnowledgeBase& kb, const Network& net,
    std::span<const ReplicaAllocation> allocations) {
  ResolvedAllocations out;
  for (const ReplicaAllocation& a : allocations) {
    const FlowRequest* f = kb.FindFlow(a.flow);
    if (f == nullptr) return absl::NotFoundError(absl::StrCat("unknown flow ", a.flow));
    auto links = net.ResolvePath(a.path);
    if (!links) {
      return absl::InvalidArgumentError(absl::StrCat(
          "allocation of ", a.flow, " uses a path that is not in the topology"));
    }
    out.links.push_back(std::move(*links));
    out.flows.push_back(f);
  }
  return out;
}

// Per-slot, per-candidate data that does not depend on other placements.
struct CandidateInfo {
  const CandidatePath* path = nullptr;
  bool analyzed = false;
  std::vector<LinkIndex> links;
  std::vector<NodeIndex> nodes;
  bool ok = false;  // false: refuted whatever else is placed
  double min_b = 0;
  double per_hop_delay = 0;
  double reliability = 1;
  double own_slack = 0;  // max_b with no contenders
};

struct FlowInfo {
  const FlowRequest* flow = nullptr;
  int replicas = 1;
  int first_slot = 0;
  double burst_bits = 0;  // burst_size * pkt_size
  std::vector<int> avoided;  // indices of anti-affine flows placed earlier
  std::vector<CandidateInfo>* candidates = nullptr;
};

class Search {
 public:
  Search(const KnowledgeBase& kb, const Network& net,
         const CandidateIndex& index, const SolverConfig& config,
         Clock::time_point start, Clock::time_point deadline)
      : kb_(kb),
        net_(net),
        config_(config),
        unit_(UnitScale(config.unit_mode)),
        start_(start),
        deadline_(deadline) {
    Prepare(index);
  }

  PlacementResult Run();

 private:
  void Prepare(const CandidateIndex& index);
  // Fills in `info` on first use; the result depends only on the flow.
  const CandidateInfo& Analyze(const FlowRequest& flow, CandidateInfo& info);
  bool TryCandidate(int k, int c);
  void Place(int k, int c);
  void Unplace(int k);
  void AddLinkUsers(int k, LinkIndex l);
  void EnterSlot(int k);
  bool FinalCheck(PlacementResult& result);

  const CandidateInfo& Chosen(int j) const {
    return (*flows_[slot_flow_[j]].candidates)[chosen_[j]];
  }

  const KnowledgeBase& kb_;
  const Network& net_;
  const SolverConfig& config_;
  const double unit_;
  const Clock::time_point start_;
  const Clock::time_point deadline_;

  std::vector<FlowInfo> flows_;
  std::vector<std::vector<CandidateInfo>> per_flow_;
  std::vector<double> zero_load_;
  std::vector<int> slot_flow_;
  std::vector<int> slot_replica_;

  std::vector<double> load_;
  std::vector<std::vector<int>> on_link_;
  std::vector<double> slack_;
  std::vector<int> chosen_;
  std::vector<size_t> next_;
  std::vector<std::set<int>> conflicts_;
  // Undo trail per placed slot.
  std::vector<std::vector<std::pair<int, double>>> saved_slack_;
  std::vector<std::vector<double>> saved_load_;
  // Scratch for the step-two check of other slots.
  std::vector<double> decrement_;
  std::vector<int> touched_;

  SolverStats stats_;
};

const CandidateInfo& Search::Analyze(const FlowRequest& flow,
                                     CandidateInfo& info) {
  if (info.analyzed) return info;
  info.analyzed = true;
  const CandidatePath& p = *info.path;
  auto links = net_.ResolvePath(p.nodes);
  if (!links || p.src != flow.src || p.dst != flow.dst) return info;
  info.links = std::move(*links);
  for (const std::string& n : p.nodes) info.nodes.push_back(*net_.FindNode(n));
  auto scan = PathOk(net_, info.links, flow.min_budget(), zero_load_, flow,
                     config_.unit_mode, config_.features.reliability);
  if (!scan) return info;
  const DelayAssignment d =
      AdditionalDelay(*scan, static_cast<int>(info.links.size()));
  info.min_b = d.min_b;
  info.per_hop_delay = d.per_hop_delay;
  info.reliability = scan->running_reliability;
  double own_q = 0;
  for (LinkIndex l : info.links) {
    own_q += (flow.burst_size - 1) * flow.pkt_size / net_.link(l).bandwidth;
  }
  info.own_slack = info.min_b + 2 * flow.tolerance - unit_ * own_q;
  info.ok = info.own_slack >= -config_.epsilon;
  return info;
}

void Search::Prepare(const CandidateIndex& index) {
  static const std::vector<CandidatePath> kEmpty;
  absl::flat_hash_map<std::string, int> flow_index;
  for (size_t i = 0; i < kb_.flows.size(); ++i) flow_index[kb_.flows[i].id] = i;

  per_flow_.resize(kb_.flows.size());
  flows_.resize(kb_.flows.size());
  int slot = 0;
  for (size_t i = 0; i < kb_.flows.size(); ++i) {
    const FlowRequest& f = kb_.flows[i];
    FlowInfo& fi = flows_[i];
    fi.flow = &f;
    fi.replicas = config_.features.protection ? f.replica_factor : 1;
    fi.first_slot = slot;
    fi.burst_bits = f.burst_size * f.pkt_size;
    if (config_.features.anti_affinity) {
      for (const std::string& other : f.anti_affinity) {
        auto it = flow_index.find(other);
        if (it != flow_index.end() && it->second < static_cast<int>(i)) {
          fi.avoided.push_back(it->second);
        }
      }
      std::sort(fi.avoided.begin(), fi.avoided.end());
    }
    auto it = index.find({f.src, f.dst});
    const std::vector<CandidatePath>& paths =
        it == index.end() ? kEmpty : it->second;
    per_flow_[i].resize(paths.size());
    for (size_t c = 0; c < paths.size(); ++c) per_flow_[i][c].path = &paths[c];
    fi.candidates = &per_flow_[i];
    for (int r = 1; r <= fi.replicas; ++r) {
      slot_flow_.push_back(static_cast<int>(i));
      slot_replica_.push_back(r);
      ++slot;
    }
  }
  const size_t slots = slot_flow_.size();
  zero_load_.assign(net_.link_count(), 0.0);
  load_.assign(net_.link_count(), 0.0);
  on_link_.assign(net_.link_count(), {});
  slack_.assign(slots, 0.0);
  chosen_.assign(slots, -1);
  next_.assign(slots, 0);
  conflicts_.assign(slots, {});
  saved_slack_.assign(slots, {});
  saved_load_.assign(slots, {});
  decrement_.assign(slots, 0.0);
}

void Search::EnterSlot(int k) {
  conflicts_[k].clear();
  next_[k] = 0;
  if (slot_replica_[k] > 1) {
    // Replicas are interchangeable, so only increasing candidate indices are
    // explored. The bound depends on the previous replica.
    next_[k] = static_cast<size_t>(chosen_[k - 1]) + 1;
    conflicts_[k].insert(k - 1);
  }
}

void Search::AddLinkUsers(int k, LinkIndex l) {
  for (int j : on_link_[l]) conflicts_[k].insert(j);
}

bool Search::TryCandidate(int k, int c) {
  const FlowInfo& fi = flows_[slot_flow_[k]];
  const FlowRequest& flow = *fi.flow;
  const CandidateInfo& cand = Analyze(flow, (*fi.candidates)[c]);
  if (!cand.ok) return false;

  // Replica disjointness.
  for (int j = fi.first_slot; j < k; ++j) {
    const CandidateInfo& other = Chosen(j);
    if (other.path->id == cand.path->id ||
        !IntermediatesDisjoint<NodeIndex>(cand.nodes, other.nodes)) {
      conflicts_[k].insert(j);
      return false;
    }
  }

  // Anti-affinity against placed flows.
  for (int g : fi.avoided) {
    const FlowInfo& gi = flows_[g];
    for (int r = 0; r < gi.replicas; ++r) {
      const int j = gi.first_slot + r;
      if (!IntermediatesDisjoint<NodeIndex>(cand.nodes, Chosen(j).nodes)) {
        conflicts_[k].insert(j);
        return false;
      }
    }
  }

  // Bandwidth.
  for (LinkIndex l : cand.links) {
    if (!(net_.link(l).bandwidth > load_[l] + flow.rate)) {
      AddLinkUsers(k, l);
      return false;
    }
  }

  // Step two, own maximum budget.
  double own = cand.own_slack;
  for (LinkIndex l : cand.links) {
    const double bw = net_.link(l).bandwidth;
    for (int j : on_link_[l]) {
      own -= unit_ * flows_[slot_flow_[j]].burst_bits / bw;
    }
  }
  if (own < -config_.epsilon) {
    for (LinkIndex l : cand.links) AddLinkUsers(k, l);
    return false;
  }

  // Step two, maximum budgets of slots already sharing a link.
  touched_.clear();
  for (LinkIndex l : cand.links) {
    const double d = unit_ * fi.burst_bits / net_.link(l).bandwidth;
    for (int j : on_link_[l]) {
      if (decrement_[j] == 0) touched_.push_back(j);
      decrement_[j] += d;
    }
  }
  int violator = -1;
  for (int j : touched_) {
    if (violator < 0 && slack_[j] - decrement_[j] < -config_.epsilon) {
      violator = j;
    }
    decrement_[j] = 0;
  }
  if (violator >= 0) {
    conflicts_[k].insert(violator);
    for (LinkIndex l : Chosen(violator).links) AddLinkUsers(k, l);
    return false;
  }
  slack_[k] = own;
  return true;
}

void Search::Place(int k, int c) {
  chosen_[k] = c;
  const FlowInfo& fi = flows_[slot_flow_[k]];
  const CandidateInfo& cand = (*fi.candidates)[c];
  auto& saved_slack = saved_slack_[k];
  auto& saved_load = saved_load_[k];
  saved_slack.clear();
  saved_load.clear();
  for (LinkIndex l : cand.links) {
    const double d = unit_ * fi.burst_bits / net_.link(l).bandwidth;
    saved_load.push_back(load_[l]);
    load_[l] += fi.flow->rate;
    for (int j : on_link_[l]) {
      saved_slack.emplace_back(j, slack_[j]);
      slack_[j] -= d;
    }
    on_link_[l].push_back(k);
  }
}

void Search::Unplace(int k) {
  const CandidateInfo& cand = Chosen(k);
  auto& saved_slack = saved_slack_[k];
  for (auto it = saved_slack.rbegin(); it != saved_slack.rend(); ++it) {
    slack_[it->first] = it->second;
  }
  for (size_t i = cand.links.size(); i-- > 0;) {
    const LinkIndex l = cand.links[i];
    on_link_[l].pop_back();
    load_[l] = saved_load_[k][i];
  }
}

bool Search::FinalCheck(PlacementResult& result) {
  const int slots = static_cast<int>(slot_flow_.size());
  std::vector<std::vector<LinkIndex>> links;
  std::vector<const FlowRequest*> flows;
  for (int k = 0; k < slots; ++k) {
    links.push_back(Chosen(k).links);
    flows.push_back(flows_[slot_flow_[k]].flow);
  }
  const std::vector<double> queue =
      QueueTimes(net_, links, flows, config_.unit_mode);
  std::vector<ReplicaAllocation> allocations;
  for (int k = 0; k < slots; ++k) {
    const CandidateInfo& cand = Chosen(k);
    ReplicaAllocation a;
    a.flow = flows[k]->id;
    a.replica = slot_replica_[k];
    a.path_id = cand.path->id;
    a.path = cand.path->nodes;
    a.min_b = cand.min_b;
    a.per_hop_delay = cand.per_hop_delay;
    a.path_reliability = cand.reliability;
    a.max_b = a.min_b + 2 * flows[k]->tolerance - queue[k];
    if (a.max_b < -config_.epsilon) return false;
    allocations.push_back(std::move(a));
  }
  std::map<std::string, std::vector<double>> rels;
  for (const ReplicaAllocation& a : allocations) {
    rels[a.flow].push_back(a.path_reliability);
  }
  for (const auto& [flow, r] : rels) {
    result.route_reliability[flow] = RouteReliability(r);
  }
  for (LinkIndex l = 0; l < static_cast<LinkIndex>(net_.link_count()); ++l) {
    if (!on_link_[l].empty()) {
      result.link_loads[{net_.link(l).src, net_.link(l).dst}] = load_[l];
    }
  }
  result.allocations = std::move(allocations);
  return true;
}

PlacementResult Search::Run() {
  PlacementResult result;
  const int slots = static_cast<int>(slot_flow_.size());
  int deepest_exhausted = -1;
  int k = 0;
  if (slots > 0) EnterSlot(0);
  while (true) {
    if (k == slots) {
      if (FinalCheck(result)) {
        result.status = PlacementStatus::kSuccess;
        break;
      }
      // Only reachable through rounding drift in the incremental slack.
      k = slots - 1;
      Unplace(k);
      for (int j = 0; j < k; ++j) conflicts_[k].insert(j);
    }
    const size_t count = flows_[slot_flow_[k]].candidates->size();
    bool placed = false;
    while (next_[k] < count) {
      if (Clock::now() >= deadline_) {
        result.status = PlacementStatus::kTimeout;
        stats_.elapsed_ms = ElapsedMs(start_);
        result.stats = stats_;
        return result;
      }
      const int c = static_cast<int>(next_[k]++);
      ++stats_.candidates_tried;
      if (TryCandidate(k, c)) {
        Place(k, c);
        placed = true;
        break;
      }
    }
    if (placed) {
      ++k;
      stats_.max_depth = std::max(stats_.max_depth, k);
      if (k < slots) EnterSlot(k);
      continue;
    }

    deepest_exhausted = std::max(deepest_exhausted, k);
    int h;
    if (config_.search == SearchMode::kBackjumping) {
      if (conflicts_[k].empty()) {
        result.blocking_flow = kb_.flows[slot_flow_[k]].id;
        break;
      }
      h = *conflicts_[k].rbegin();
      for (int j : conflicts_[k]) {
        if (j != h) conflicts_[h].insert(j);
      }
    } else {
      if (k == 0) {
        result.blocking_flow = kb_.flows[slot_flow_[deepest_exhausted]].id;
        break;
      }
      h = k - 1;
    }
    ++stats_.backtracks;
    for (int j = k - 1; j >= h; --j) Unplace(j);
    k = h;
  }
  if (result.status != PlacementStatus::kSuccess) {
    result.status = PlacementStatus::kInfeasible;
  }
  stats_.elapsed_ms = ElapsedMs(start_);
  result.stats = stats_;
  return result;
}

}  // namespace

absl::string_view UnitModeName(UnitMode mode) {
  return mode == UnitMode::kSi ? "si" : "raw";
}

absl::StatusOr<UnitMode> ParseUnitMode(absl::string_view text) {
  if (text == "raw") return UnitMode::kRaw;
  if (text == "si") return UnitMode::kSi;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown unit mode '", text, "' (expected raw or si)"));
}

absl::StatusOr<FeatureSet> ParseFeatures(absl::string_view text) {
  FeatureSet out = FeatureSet::Plain();
  bool any = false;
  for (absl::string_view part : absl::StrSplit(text, ',')) {
    part = absl::StripAsciiWhitespace(part);
    if (part == "plain") {
    } else if (part == "reliability") {
      out.reliability = true;
    } else if (part == "protection") {
      out.protection = true;
    } else if (part == "anti-affinity") {
      out.anti_affinity = true;
    } else if (part == "all") {
      out = FeatureSet::All();
    } else {
      return absl::InvalidArgumentError(absl::StrCat(
          "unknown feature '", part,
          "' (expected plain, reliability, protection, anti-affinity or all)"));
    }
    any = true;
  }
  if (!any) return absl::InvalidArgumentError("empty feature list");
  return out;
}

std::string FeatureSetName(const FeatureSet& features) {
  if (features == FeatureSet::All()) return "all";
  std::vector<absl::string_view> parts;
  if (features.reliability) parts.push_back("reliability");
  if (features.protection) parts.push_back("protection");
  if (features.anti_affinity) parts.push_back("anti-affinity");
  if (parts.empty()) return "plain";
  return absl::StrJoin(parts, ",");
}

absl::string_view PlacementStatusName(PlacementStatus status) {
  switch (status) {
    case PlacementStatus::kSuccess:
      return "Success";
    case PlacementStatus::kInfeasible:
      return "Infeasible";
    case PlacementStatus::kTimeout:
      return "Timeout";
  }
  return "Unknown";
}

double TransmissionDelay(double pkt_size, double bandwidth, UnitMode mode) {
  return pkt_size / bandwidth * UnitScale(mode);
}

std::optional<double> HopOk(const Network& network, LinkIndex link,
                            double used, const FlowRequest& flow, double min_b,
                            UnitMode mode) {
  const Link& l = network.link(link);
  if (!(l.bandwidth > used + flow.rate)) return std::nullopt;
  const double d_proc = network.d_proc(network.link_dst(link));
  return min_b - d_proc - TransmissionDelay(flow.pkt_size, l.bandwidth, mode) -
         l.d_prop;
}

std::optional<PathScan> PathOk(const Network& network,
                               std::span<const LinkIndex> links,
                               double min_budget,
                               std::span<const double> link_loads,
                               const FlowRequest& flow, UnitMode mode,
                               bool check_reliability) {
  PathScan scan{min_budget, 1.0};
  const double req = check_reliability ? flow.req_rel : 0.0;
  for (LinkIndex l : links) {
    auto next = HopOk(network, l, link_loads[l], flow,
                      scan.remaining_min_budget, mode);
    if (!next) return std::nullopt;
    scan.remaining_min_budget = *next;
    auto rel = ReliabilityOk(scan.running_reliability,
                             network.link(l).reliability, req);
    if (!rel) return std::nullopt;
    scan.running_reliability = *rel;
  }
  return scan;
}

DelayAssignment AdditionalDelay(const PathScan& scan, int hop_count) {
  if (scan.remaining_min_budget > 0 && hop_count > 0) {
    return {scan.remaining_min_budget / hop_count, scan.remaining_min_budget};
  }
  return {0.0, scan.remaining_min_budget};
}

absl::StatusOr<double> TotQTime(const KnowledgeBase& kb,
                                std::span<const ReplicaAllocation> allocations,
                                size_t entry, UnitMode mode) {
  if (entry >= allocations.size()) {
    return absl::OutOfRangeError("allocation index out of range");
  }
  const Network net(kb);
  auto resolved = Resolve(kb, net, allocations);
  if (!resolved.ok()) return resolved.status();
  return QueueTimes(net, resolved->links, resolved->flows, mode)[entry];
}

absl::StatusOr<std::vector<ReplicaAllocation>> ValidPaths(
    const KnowledgeBase& kb, std::vector<ReplicaAllocation> allocations,
    UnitMode mode, double epsilon) {
  const Network net(kb);
  auto resolved = Resolve(kb, net, allocations);
  if (!resolved.ok()) return resolved.status();
  const std::vector<double> queue =
      QueueTimes(net, resolved->links, resolved->flows, mode);
  for (size_t i = 0; i < allocations.size(); ++i) {
    ReplicaAllocation& a = allocations[i];
    a.max_b = a.min_b + 2 * resolved->flows[i]->tolerance - queue[i];
    if (a.max_b < -epsilon) {
      return absl::FailedPreconditionError(
          absl::StrCat("maximum budget of ", a.flow, " replica ", a.replica,
                       " is ", a.max_b, " ms"));
    }
  }
  return allocations;
}

std::optional<ReplicaAllocation> EligiblePath(
    const KnowledgeBase& kb, const FlowRequest& flow, int replica,
    std::span<const ReplicaAllocation> placed,
    std::span<const CandidatePath> candidates, const SolverConfig& config,
    size_t start, size_t* index) {
  const Network net(kb);
  std::vector<double> loads(net.link_count(), 0.0);
  std::vector<ReplicaAllocation> same_flow;
  std::vector<ReplicaAllocation> others;
  for (const ReplicaAllocation& a : placed) {
    const FlowRequest* f = kb.FindFlow(a.flow);
    auto links = net.ResolvePath(a.path);
    if (f == nullptr || !links) continue;
    for (LinkIndex l : *links) loads[l] += f->rate;
    if (a.flow == flow.id) {
      if (config.features.protection) same_flow.push_back(a);
    } else if (config.features.anti_affinity) {
      others.push_back(a);
    }
  }
  for (size_t i = start; i < candidates.size(); ++i) {
    const CandidatePath& c = candidates[i];
    if (!ValidCandidate(flow, c, same_flow, others)) continue;
    auto links = net.ResolvePath(c.nodes);
    if (!links) continue;
    auto scan = PathOk(net, *links, flow.min_budget(), loads, flow,
                       config.unit_mode, config.features.reliability);
    if (!scan) continue;
    const DelayAssignment d =
        AdditionalDelay(*scan, static_cast<int>(links->size()));
    ReplicaAllocation a;
    a.flow = flow.id;
    a.replica = replica;
    a.path_id = c.id;
    a.path = c.nodes;
    a.min_b = d.min_b;
    a.per_hop_delay = d.per_hop_delay;
    a.path_reliability = scan->running_reliability;
    if (index != nullptr) *index = i;
    return a;
  }
  return std::nullopt;
}

PlacementResult PlaceAll(const KnowledgeBase& kb, const CandidateIndex& index,
                         const SolverConfig& config) {
  const Clock::time_point start = Clock::now();
  const Clock::time_point deadline =
      config.deadline ? *config.deadline
                      : start + std::chrono::milliseconds(config.timeout_ms);
  const Network net(kb);
  Search search(kb, net, index, config, start, deadline);
  return search.Run();
}

}  // namespace dglbf
