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

#include "dglbf/bench.h"

#include <sys/resource.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "absl/status/status.h"
#include "absl/strings/match.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "dglbf/network.h"
#include "dglbf/rng.h"
#include "nlohmann/json.hpp"

namespace dglbf {
namespace {

using Clock = std::chrono::steady_clock;

constexpr int kCevNodes = 46;

struct Variant {
  const char* name;
  FeatureSet features;
};

constexpr Variant kCevVariants[] = {
    {"plain", {false, false, false}},
    {"protection", {false, true, false}},
    {"anti-affinity", {false, false, true}},
    {"reliability", {true, false, false}},
    {"all", {true, true, true}},
};

constexpr int kCevBatches[] = {150, 225, 300, 375, 400};

uint64_t DoubleBits(double x) {
  uint64_t bits;
  std::memcpy(&bits, &x, sizeof(bits));
  return bits;
}

std::optional<int64_t> PeakMemoryKb() {
  struct rusage usage;
  if (getrusage(RUSAGE_SELF, &usage) != 0) return std::nullopt;
  return static_cast<int64_t>(usage.ru_maxrss);
}

std::string Ms(double x) { return absl::StrFormat("%.4f", x); }

absl::Status ParseError(absl::string_view row, absl::string_view what) {
  return absl::InvalidArgumentError(
      absl::StrCat("bad record row '", row, "': ", what));
}

struct Stats {
  double mean = 0;
  double stddev = 0;
  double median = 0;
};

Stats Summarize(std::vector<double> xs) {
  Stats s;
  for (double x : xs) s.mean += x;
  s.mean /= xs.size();
  if (xs.size() > 1) {
    double ss = 0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / (xs.size() - 1));
  }
  std::sort(xs.begin(), xs.end());
  const size_t n = xs.size();
  s.median = n % 2 == 1 ? xs[n / 2] : (xs[n / 2 - 1] + xs[n / 2]) / 2;
  return s;
}

std::string OptionalMs(const std::optional<double>& x) {
  return x ? Ms(*x) : "";
}

std::string StemOf(const std::string& csv_path) {
  if (absl::EndsWith(csv_path, ".csv")) {
    return csv_path.substr(0, csv_path.size() - 4);
  }
  return csv_path;
}

absl::Status WriteFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) return absl::UnavailableError(absl::StrCat("cannot write ", path));
  out << content;
  if (!out) return absl::UnavailableError(absl::StrCat("error writing ", path));
  return absl::OkStatus();
}

}  // namespace

std::string ExperimentPoint::model_label() const {
  switch (workload) {
    case Workload::kBarabasiAlbert:
      return "ba";
    case Workload::kErdosRenyi:
      return "er";
    case Workload::kCev:
      break;
  }
  for (const Variant& v : kCevVariants) {
    if (v.features == features) return absl::StrCat("cev-", v.name);
  }
  std::vector<std::string> parts;
  if (features.reliability) parts.push_back("reliability");
  if (features.protection) parts.push_back("protection");
  if (features.anti_affinity) parts.push_back("anti-affinity");
  return absl::StrCat("cev-", absl::StrJoin(parts, "+"));
}

int ExperimentPoint::node_count() const {
  return workload == Workload::kCev ? kCevNodes : 1 << node_exponent;
}

uint64_t DeriveSeed(uint64_t master_seed, const ExperimentPoint& p) {
  uint64_t h = MixSeed(master_seed, static_cast<uint64_t>(p.workload));
  h = MixSeed(h, static_cast<uint64_t>(p.node_exponent));
  h = MixSeed(h, static_cast<uint64_t>(p.flow_count));
  h = MixSeed(h, DoubleBits(p.protection_prob));
  h = MixSeed(h, static_cast<uint64_t>(p.run));
  h = MixSeed(h, (p.features.reliability ? 1 : 0) |
                     (p.features.protection ? 2 : 0) |
                     (p.features.anti_affinity ? 4 : 0));
  return h;
}

std::vector<ExperimentPoint> ExpandGrid(const GridSpec& grid,
                                        uint64_t master_seed) {
  std::vector<int> flows = grid.flow_counts;
  if (flows.empty()) {
    for (int f = 500; f <= 10000; f += 500) flows.push_back(f);
  }
  std::vector<ExperimentPoint> points;
  for (GraphModel m : grid.models) {
    for (int e : grid.node_exponents) {
      for (int f : flows) {
        for (double p : grid.protection_probs) {
          for (int r = 1; r <= grid.runs; ++r) {
            ExperimentPoint pt;
            pt.workload = m == GraphModel::kBarabasiAlbert
                              ? Workload::kBarabasiAlbert
                              : Workload::kErdosRenyi;
            pt.node_exponent = e;
            pt.flow_count = f;
            pt.protection_prob = p;
            pt.run = r;
            pt.features = FeatureSet::All();
            pt.seed = DeriveSeed(master_seed, pt);
            points.push_back(pt);
          }
        }
      }
    }
  }
  return points;
}

std::vector<ExperimentPoint> CevVariantGrid(int runs, uint64_t master_seed) {
  std::vector<ExperimentPoint> points;
  for (const Variant& v : kCevVariants) {
    for (int batch : kCevBatches) {
      for (int r = 1; r <= runs; ++r) {
        ExperimentPoint pt;
        pt.workload = Workload::kCev;
        pt.node_exponent = 0;
        pt.flow_count = batch;
        pt.protection_prob = 0;
        pt.run = r;
        pt.features = v.features;
        pt.seed = DeriveSeed(master_seed, pt);
        points.push_back(pt);
      }
    }
  }
  return points;
}

absl::StatusOr<KnowledgeBase> BuildInstance(const ExperimentPoint& point,
                                            const BenchConfig& config) {
  if (point.workload == Workload::kCev) {
    return GenCevBatch(point.flow_count, point.seed, config.data_dir);
  }
  GenSpec spec;
  spec.model = point.workload == Workload::kBarabasiAlbert
                   ? GraphModel::kBarabasiAlbert
                   : GraphModel::kErdosRenyi;
  spec.node_exponent = point.node_exponent;
  spec.er_prob = config.er_prob;
  spec.seed = MixSeed(point.seed, 1);
  auto kb = GenTopology(spec);
  if (!kb.ok()) return kb.status();
  FlowGenSpec flows;
  flows.count = point.flow_count;
  flows.protection_prob = point.protection_prob;
  flows.seed = MixSeed(point.seed, 2);
  auto generated = GenFlows(*kb, flows);
  if (!generated.ok()) return generated.status();
  kb->flows = std::move(*generated);
  return kb;
}

ExperimentRecord RunPoint(const ExperimentPoint& point,
                          const BenchConfig& config) {
  ExperimentRecord record;
  record.point = point;
  auto kb = BuildInstance(point, config);
  if (!kb.ok()) {
    record.status = PlacementStatus::kInfeasible;
    record.peak_mem_kb = PeakMemoryKb();
    return record;
  }
  const Clock::time_point start = Clock::now();
  const Network network(*kb);
  const CandidateIndex index =
      BuildCandidateIndex(*kb, network, config.limits);
  record.enum_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - start).count();

  SolverConfig solver;
  solver.unit_mode = config.unit_mode;
  solver.features = point.features;
  solver.timeout_ms = config.timeout_ms;
  solver.deadline = start + std::chrono::milliseconds(config.timeout_ms);
  PlacementResult result = PlaceAll(*kb, index, solver);

  record.elapsed_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  record.status = result.status;
  record.backtracks = result.stats.backtracks;
  if (result.status == PlacementStatus::kSuccess && point.flow_count > 0) {
    record.tpf_ms = record.elapsed_ms / point.flow_count;
  }
  record.peak_mem_kb = PeakMemoryKb();
  record.allocations = std::move(result.allocations);
  return record;
}

std::vector<CellAggregate> Aggregate(
    const std::vector<ExperimentRecord>& records) {
  using Key = std::tuple<std::string, int, int, double>;
  std::vector<Key> order;
  std::map<Key, std::vector<const ExperimentRecord*>> cells;
  for (const ExperimentRecord& r : records) {
    Key key{r.point.model_label(), r.point.node_count(), r.point.flow_count,
            r.point.protection_prob};
    auto [it, inserted] = cells.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&r);
  }
  std::vector<CellAggregate> out;
  for (const Key& key : order) {
    CellAggregate cell;
    std::tie(cell.model, cell.nodes, cell.flows, cell.prot_prob) = key;
    std::vector<double> elapsed;
    std::vector<double> tpf;
    for (const ExperimentRecord* r : cells[key]) {
      switch (r->status) {
        case PlacementStatus::kSuccess:
          ++cell.successes;
          elapsed.push_back(r->elapsed_ms);
          if (r->tpf_ms) tpf.push_back(*r->tpf_ms);
          break;
        case PlacementStatus::kTimeout:
          ++cell.timeouts;
          break;
        case PlacementStatus::kInfeasible:
          ++cell.infeasible;
          break;
      }
    }
    if (!elapsed.empty()) {
      const Stats s = Summarize(elapsed);
      cell.mean_elapsed_ms = s.mean;
      cell.stddev_elapsed_ms = s.stddev;
      cell.median_elapsed_ms = s.median;
    }
    if (!tpf.empty()) {
      const Stats s = Summarize(tpf);
      cell.mean_tpf_ms = s.mean;
      cell.stddev_tpf_ms = s.stddev;
    }
    out.push_back(std::move(cell));
  }
  return out;
}

std::string RecordToCsvRow(const ExperimentRecord& r) {
  return absl::StrCat(
      r.point.model_label(), ",", r.point.node_count(), ",",
      r.point.flow_count, ",", FormatNumber(r.point.protection_prob), ",",
      r.point.run, ",", r.point.seed, ",", PlacementStatusName(r.status), ",",
      Ms(r.elapsed_ms), ",", OptionalMs(r.tpf_ms), ",", r.backtracks, ",",
      Ms(r.enum_ms), ",",
      r.peak_mem_kb ? absl::StrCat(*r.peak_mem_kb) : std::string());
}

absl::StatusOr<ExperimentRecord> RecordFromCsvRow(absl::string_view row) {
  std::vector<std::string> f = absl::StrSplit(row, ',');
  if (f.size() != 12) return ParseError(row, "expected 12 fields");
  ExperimentRecord r;
  ExperimentPoint& p = r.point;
  const std::string& model = f[0];
  if (model == "ba") {
    p.workload = Workload::kBarabasiAlbert;
  } else if (model == "er") {
    p.workload = Workload::kErdosRenyi;
  } else if (absl::StartsWith(model, "cev-")) {
    p.workload = Workload::kCev;
    p.features = FeatureSet::Plain();
    bool known = false;
    for (const Variant& v : kCevVariants) {
      if (model == absl::StrCat("cev-", v.name)) {
        p.features = v.features;
        known = true;
      }
    }
    if (!known) {
      for (absl::string_view part :
           absl::StrSplit(absl::string_view(model).substr(4), '+')) {
        auto fs = ParseFeatures(part);
        if (!fs.ok()) return ParseError(row, "unknown model");
        p.features.reliability |= fs->reliability;
        p.features.protection |= fs->protection;
        p.features.anti_affinity |= fs->anti_affinity;
      }
    }
  } else {
    return ParseError(row, "unknown model");
  }
  int nodes;
  if (!absl::SimpleAtoi(f[1], &nodes) || !absl::SimpleAtoi(f[2], &p.flow_count) ||
      !absl::SimpleAtod(f[3], &p.protection_prob) ||
      !absl::SimpleAtoi(f[4], &p.run) || !absl::SimpleAtoi(f[5], &p.seed)) {
    return ParseError(row, "bad point field");
  }
  if (p.workload == Workload::kCev) {
    p.node_exponent = 0;
  } else {
    p.node_exponent = 0;
    while ((1 << p.node_exponent) < nodes) ++p.node_exponent;
  }
  auto status = [&]() -> absl::StatusOr<PlacementStatus> {
    for (PlacementStatus s : {PlacementStatus::kSuccess,
                              PlacementStatus::kInfeasible,
                              PlacementStatus::kTimeout}) {
      if (f[6] == PlacementStatusName(s)) return s;
    }
    return ParseError(row, "unknown status");
  }();
  if (!status.ok()) return status.status();
  r.status = *status;
  if (!absl::SimpleAtod(f[7], &r.elapsed_ms) ||
      !absl::SimpleAtoi(f[9], &r.backtracks) ||
      !absl::SimpleAtod(f[10], &r.enum_ms)) {
    return ParseError(row, "bad metric field");
  }
  if (!f[8].empty()) {
    double tpf;
    if (!absl::SimpleAtod(f[8], &tpf)) return ParseError(row, "bad tpf_ms");
    r.tpf_ms = tpf;
  }
  if (!f[11].empty()) {
    int64_t mem;
    if (!absl::SimpleAtoi(f[11], &mem)) return ParseError(row, "bad peak_mem_kb");
    r.peak_mem_kb = mem;
  }
  return r;
}

std::string RecordsToJson(const std::vector<ExperimentRecord>& records) {
  using nlohmann::json;
  json arr = json::array();
  for (const ExperimentRecord& r : records) {
    arr.push_back({
        {"model", r.point.model_label()},
        {"nodes", r.point.node_count()},
        {"flows", r.point.flow_count},
        {"prot_prob", r.point.protection_prob},
        {"run", r.point.run},
        {"seed", r.point.seed},
        {"status", std::string(PlacementStatusName(r.status))},
        {"elapsed_ms", r.elapsed_ms},
        {"tpf_ms", r.tpf_ms ? json(*r.tpf_ms) : json(nullptr)},
        {"backtracks", r.backtracks},
        {"enum_ms", r.enum_ms},
        {"peak_mem_kb", r.peak_mem_kb ? json(*r.peak_mem_kb) : json(nullptr)},
    });
  }
  return arr.dump(2) + "\n";
}

std::string AggregatesToCsv(const std::vector<CellAggregate>& cells) {
  std::string out =
      "model,nodes,flows,prot_prob,successes,timeouts,infeasible,"
      "mean_elapsed_ms,stddev_elapsed_ms,median_elapsed_ms,mean_tpf_ms,"
      "stddev_tpf_ms\n";
  for (const CellAggregate& c : cells) {
    absl::StrAppend(&out, c.model, ",", c.nodes, ",", c.flows, ",",
                    FormatNumber(c.prot_prob), ",", c.successes, ",",
                    c.timeouts, ",", c.infeasible, ",",
                    OptionalMs(c.mean_elapsed_ms), ",",
                    OptionalMs(c.stddev_elapsed_ms), ",",
                    OptionalMs(c.median_elapsed_ms), ",",
                    OptionalMs(c.mean_tpf_ms), ",",
                    OptionalMs(c.stddev_tpf_ms), "\n");
  }
  return out;
}

absl::StatusOr<SuiteResult> RunSuite(const std::vector<ExperimentPoint>& points,
                                     const BenchConfig& config,
                                     const std::string& csv_path) {
  SuiteResult suite;
  bool has_header = false;
  {
    std::ifstream in(csv_path);
    std::string line;
    while (in && std::getline(in, line)) {
      line = std::string(absl::StripTrailingAsciiWhitespace(line));
      if (line.empty()) continue;
      if (line == kRecordCsvHeader) {
        has_header = true;
        continue;
      }
      auto record = RecordFromCsvRow(line);
      if (!record.ok()) return record.status();
      suite.records.push_back(std::move(*record));
    }
  }
  auto done = [&](const ExperimentPoint& p) {
    return std::any_of(suite.records.begin(), suite.records.end(),
                       [&](const ExperimentRecord& r) {
                         return r.point.model_label() == p.model_label() &&
                                r.point.node_count() == p.node_count() &&
                                r.point.flow_count == p.flow_count &&
                                r.point.protection_prob == p.protection_prob &&
                                r.point.run == p.run && r.point.seed == p.seed;
                       });
  };
  std::vector<size_t> todo;
  for (size_t i = 0; i < points.size(); ++i) {
    if (done(points[i])) {
      ++suite.skipped;
    } else {
      todo.push_back(i);
    }
  }

  std::FILE* csv = std::fopen(csv_path.c_str(), "a");
  if (csv == nullptr) {
    return absl::UnavailableError(absl::StrCat("cannot open ", csv_path));
  }
  if (!has_header) {
    std::fprintf(csv, "%s\n", std::string(kRecordCsvHeader).c_str());
    std::fflush(csv);
  }

  std::vector<std::optional<ExperimentRecord>> fresh(todo.size());
  std::mutex mu;
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < todo.size(); i = next++) {
      ExperimentRecord record = RunPoint(points[todo[i]], config);
      record.allocations.clear();
      std::lock_guard<std::mutex> lock(mu);
      std::fprintf(csv, "%s\n", RecordToCsvRow(record).c_str());
      std::fflush(csv);
      fresh[i] = std::move(record);
    }
  };
  const int width = std::max(1, std::min<int>(config.parallelism, todo.size()));
  if (width == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < width; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }
  std::fclose(csv);

  for (auto& r : fresh) suite.records.push_back(std::move(*r));
  suite.aggregates = Aggregate(suite.records);
  const std::string stem = StemOf(csv_path);
  if (absl::Status s = WriteFile(stem + ".json", RecordsToJson(suite.records));
      !s.ok()) {
    return s;
  }
  if (absl::Status s =
          WriteFile(stem + ".summary.csv", AggregatesToCsv(suite.aggregates));
      !s.ok()) {
    return s;
  }
  return suite;
}

}  // namespace dglbf
