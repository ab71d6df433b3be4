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
// Two-step placement. Step one picks a candidate path for every (flow,
// replica) slot, checking bandwidth, reliability, protection and
// anti-affinity, and pads the path so packets arrive at budget - Th. Step two
// checks that each path's maximum budget survives the queuing delay caused by
// the other allocations. The search is exhaustive: Infeasible means every
// combination of candidates was refuted.
//
// The search visits assignments in the same order as chronological
// backtracking over slots (flow declaration order, replicas in order) and
// candidates (canonical order), so it returns the same first solution.
// Conflict-directed backjumping and incremental step-two pruning only skip
// subtrees that cannot contain a solution.

#ifndef DGLBF_SOLVER_H_
#define DGLBF_SOLVER_H_

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "dglbf/allocation.h"
#include "dglbf/kb.h"
#include "dglbf/network.h"
#include "dglbf/pathgen.h"

namespace dglbf {

// kRaw subtracts pkt/bw (Mb over Mbps) from millisecond budgets as is.
// kSi converts it to milliseconds first.
enum class UnitMode { kRaw, kSi };

inline double UnitScale(UnitMode mode) {
  return mode == UnitMode::kSi ? 1000.0 : 1.0;
}

absl::string_view UnitModeName(UnitMode mode);
absl::StatusOr<UnitMode> ParseUnitMode(absl::string_view text);

struct FeatureSet {
  bool reliability = true;
  bool protection = true;
  bool anti_affinity = true;

  static FeatureSet All() { return {}; }
  static FeatureSet Plain() { return {false, false, false}; }

  bool operator==(const FeatureSet&) const = default;
};

// Comma-separated list of plain, reliability, protection, anti-affinity, all.
absl::StatusOr<FeatureSet> ParseFeatures(absl::string_view text);
std::string FeatureSetName(const FeatureSet& features);

enum class SearchMode {
  kBackjumping,
  kChronological,
};

struct SolverConfig {
  UnitMode unit_mode = UnitMode::kRaw;
  int64_t timeout_ms = 1'800'000;
  // Absolute deadline; overrides timeout_ms when set.
  std::optional<std::chrono::steady_clock::time_point> deadline;
  double epsilon = 1e-9;  // slack for max_b >= 0
  FeatureSet features;
  SearchMode search = SearchMode::kBackjumping;
};

enum class PlacementStatus { kSuccess, kInfeasible, kTimeout };

absl::string_view PlacementStatusName(PlacementStatus status);

struct SolverStats {
  double elapsed_ms = 0;
  int64_t backtracks = 0;
  int64_t candidates_tried = 0;
  int max_depth = 0;
};

struct PlacementResult {
  PlacementStatus status = PlacementStatus::kInfeasible;
  // Slot order: flows in declaration order, replicas ascending. Empty unless
  // status is kSuccess.
  std::vector<ReplicaAllocation> allocations;
  std::map<std::string, double> route_reliability;
  // Rate consumed per directed link; links without load are omitted.
  std::map<std::pair<std::string, std::string>, double> link_loads;
  SolverStats stats;
  // On kInfeasible, a flow that cannot be placed whatever the choices before
  // it.
  std::string blocking_flow;
};

// pkt_size / bandwidth, scaled per `mode`.
double TransmissionDelay(double pkt_size, double bandwidth, UnitMode mode);

// One hop over `link` carrying `used` Mbps already. Returns the new residual
// minimum budget, or nullopt if bandwidth > used + rate does not hold.
std::optional<double> HopOk(const Network& network, LinkIndex link,
                            double used, const FlowRequest& flow, double min_b,
                            UnitMode mode);

struct PathScan {
  double remaining_min_budget = 0;
  double running_reliability = 1;
};

// Folds HopOk along `links` starting from `min_budget`. `link_loads` is
// indexed by LinkIndex. The running reliability is checked against
// flow.req_rel when `check_reliability` is set and req_rel > 0.
std::optional<PathScan> PathOk(const Network& network,
                               std::span<const LinkIndex> links,
                               double min_budget,
                               std::span<const double> link_loads,
                               const FlowRequest& flow, UnitMode mode,
                               bool check_reliability);

struct DelayAssignment {
  double per_hop_delay = 0;
  double min_b = 0;
};

DelayAssignment AdditionalDelay(const PathScan& scan, int hop_count);

// Estimated queuing time of allocations[entry] given every other
// allocation, in ms under `mode`.
absl::StatusOr<double> TotQTime(const KnowledgeBase& kb,
                                std::span<const ReplicaAllocation> allocations,
                                size_t entry, UnitMode mode);

// Fills max_b = min_b + 2*Th - TotQTime for every allocation. Fails, naming
// the first violating allocation, if any max_b < -epsilon.
absl::StatusOr<std::vector<ReplicaAllocation>> ValidPaths(
    const KnowledgeBase& kb, std::vector<ReplicaAllocation> allocations,
    UnitMode mode, double epsilon);

// First candidate at or after `start` that passes ValidCandidate and PathOk
// given `placed` (whose link loads are derived from their paths). The
// returned allocation lacks max_b; `index` receives its candidate position.
std::optional<ReplicaAllocation> EligiblePath(
    const KnowledgeBase& kb, const FlowRequest& flow, int replica,
    std::span<const ReplicaAllocation> placed,
    std::span<const CandidatePath> candidates, const SolverConfig& config,
    size_t start = 0, size_t* index = nullptr);

PlacementResult PlaceAll(const KnowledgeBase& kb, const CandidateIndex& index,
                         const SolverConfig& config);

}  // namespace dglbf

#endif  // DGLBF_SOLVER_H_
