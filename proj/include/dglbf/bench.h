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
// Experiment harness: seeded grid points over random or CEV workloads,
// per-point timing, resumable CSV output and per-cell aggregates.

#ifndef DGLBF_BENCH_H_
#define DGLBF_BENCH_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "dglbf/allocation.h"
#include "dglbf/pathgen.h"
#include "dglbf/solver.h"
#include "dglbf/topogen.h"

namespace dglbf {

enum class Workload { kBarabasiAlbert, kErdosRenyi, kCev };

struct ExperimentPoint {
  Workload workload = Workload::kErdosRenyi;
  int node_exponent = 4;  // ignored for kCev
  int flow_count = 10;
  double protection_prob = 0;  // ignored for kCev
  int run = 1;
  uint64_t seed = 0;
  FeatureSet features;

  // "ba", "er", or "cev-<variant>".
  std::string model_label() const;
  int node_count() const;

  bool operator==(const ExperimentPoint&) const = default;
};

// hash(master, point fields other than seed).
uint64_t DeriveSeed(uint64_t master_seed, const ExperimentPoint& point);

struct GridSpec {
  std::vector<GraphModel> models = {GraphModel::kBarabasiAlbert,
                                    GraphModel::kErdosRenyi};
  std::vector<int> node_exponents = {4, 5, 6, 7, 8, 9, 10};
  std::vector<int> flow_counts;  // defaults to 500..10000 step 500
  std::vector<double> protection_probs = {0.25, 0.5, 0.75};
  int runs = 10;
};

std::vector<ExperimentPoint> ExpandGrid(const GridSpec& grid,
                                        uint64_t master_seed);

// Plain, Protection, Anti-Affinity, Reliability and All over batches of 150,
// 225, 300, 375 and 400 flows.
std::vector<ExperimentPoint> CevVariantGrid(int runs, uint64_t master_seed);

struct BenchConfig {
  int64_t timeout_ms = 1'800'000;  // covers enumeration and solve
  UnitMode unit_mode = UnitMode::kRaw;
  EnumerationLimits limits = EnumerationLimits::Default();
  double er_prob = 0.7;
  std::string data_dir = DefaultDataDir();
  int parallelism = 1;
};

struct ExperimentRecord {
  ExperimentPoint point;
  PlacementStatus status = PlacementStatus::kInfeasible;
  double elapsed_ms = 0;  // enumeration + solve
  std::optional<double> tpf_ms;  // Success only
  int64_t backtracks = 0;
  double enum_ms = 0;
  std::optional<int64_t> peak_mem_kb;
  // Not serialized.
  std::vector<ReplicaAllocation> allocations;
};

// Generates the instance for `point` (topology and flows, from its seed).
absl::StatusOr<KnowledgeBase> BuildInstance(const ExperimentPoint& point,
                                            const BenchConfig& config);

ExperimentRecord RunPoint(const ExperimentPoint& point,
                          const BenchConfig& config);

struct CellAggregate {
  std::string model;
  int nodes = 0;
  int flows = 0;
  double prot_prob = 0;
  int successes = 0;
  int timeouts = 0;
  int infeasible = 0;
  // Over Success rows only; empty when there are none.
  std::optional<double> mean_elapsed_ms;
  std::optional<double> stddev_elapsed_ms;
  std::optional<double> median_elapsed_ms;
  std::optional<double> mean_tpf_ms;
  std::optional<double> stddev_tpf_ms;
};

std::vector<CellAggregate> Aggregate(const std::vector<ExperimentRecord>& records);

inline constexpr absl::string_view kRecordCsvHeader =
    "model,nodes,flows,prot_prob,run,seed,status,elapsed_ms,tpf_ms,backtracks,"
    "enum_ms,peak_mem_kb";

std::string RecordToCsvRow(const ExperimentRecord& record);
absl::StatusOr<ExperimentRecord> RecordFromCsvRow(absl::string_view row);
std::string RecordsToJson(const std::vector<ExperimentRecord>& records);
std::string AggregatesToCsv(const std::vector<CellAggregate>& cells);

struct SuiteResult {
  std::vector<ExperimentRecord> records;  // previously completed ones first
  int skipped = 0;                        // points found already in the CSV
  std::vector<CellAggregate> aggregates;
};

// Runs every point not yet recorded in `csv_path`, appending one row per
// point as it completes, then writes `<csv_path minus .csv>.json` (all rows)
// and `<...>.summary.csv` (aggregates).
absl::StatusOr<SuiteResult> RunSuite(const std::vector<ExperimentPoint>& points,
                                     const BenchConfig& config,
                                     const std::string& csv_path);

}  // namespace dglbf

#endif  // DGLBF_BENCH_H_
