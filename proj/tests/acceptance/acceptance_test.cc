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
// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "dglbf/bench.h"
#include "dglbf/cli.h"
#include "dglbf/kb.h"
#include "dglbf/network.h"
#include "dglbf/pathgen.h"
#include "dglbf/report.h"
#include "dglbf/rng.h"
#include "dglbf/solver.h"
#include "dglbf/topogen.h"
#include "support/brute_force.h"
#include "support/checker.h"
#include "support/instances.h"

namespace dglbf {
namespace {

using Clock = std::chrono::steady_clock;

double MsSince(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

double Median(std::vector<double> v) {
  if (v.empty()) return NAN;
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

double Mean(const std::vector<double>& v) {
  double sum = 0;
  for (double x : v) sum += x;
  return v.empty() ? NAN : sum / v.size();
}

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> failures;

  void Expect(bool condition, std::string what) {
    if (!condition) {
      pass = false;
      if (failures.size() < 8) failures.push_back(std::move(what));
    }
  }
};

bool Near(double actual, double expected, double tolerance) {
  return std::abs(actual - expected) <= tolerance;
}

// Table I of the CEV example.
Outcome TableOneRegression() {
  Outcome out;
  const std::string dir = DefaultDataDir() + "/cev";
  const std::string topology = dir + "/topology.pl";
  const std::string flows = dir + "/flows.pl";
  const char* argv[] = {"dglbf",   "place",      "--topology", topology.c_str(),
                        "--flows", flows.c_str(), "--features", "all",
                        "--unit-mode", "raw",     "--format",   "json"};
  std::ostringstream stdout_text, stderr_text;
  const Clock::time_point start = Clock::now();
  const int code = RunCli(static_cast<int>(std::size(argv)), argv, stdout_text,
                          stderr_text);
  const double ms = MsSince(start);
  out.Expect(code == kExitSuccess, absl::StrCat("exit code ", code, ": ",
                                                stderr_text.str()));
  auto result = PlacementFromJson(stdout_text.str());
  out.Expect(result.ok(), "output is not a placement document");
  if (!result.ok()) return out;

  struct Row {
    std::string flow;
    int replica;
    std::vector<std::string> path;
    double min_b, max_b, delay, rel_pct;
  };
  const std::vector<Row> expected = {
      {"f1", 1, {"du11", "ns11", "ns22", "ns32", "ns8", "ns52", "sm2cb"},
       7, 27, 1.17, 97.04},
      {"f2", 1, {"ns12", "ns21", "ns31", "ns6"}, 75, 95, 25, 98.32},
      {"f2", 2, {"ns12", "ns22", "ns32", "ns6"}, 71, 91, 23.7, 98.15},
      {"f3", 1, {"du21", "ns14", "ns21", "ns31", "ns41", "ns51", "sm1cb"},
       0, 20, 0, 96.31},
  };
  out.Expect(result->status == PlacementStatus::kSuccess, "status is not Success");
  out.Expect(result->allocations.size() == expected.size(),
             absl::StrCat(result->allocations.size(), " allocation rows"));
  for (const Row& row : expected) {
    const ReplicaAllocation* got = nullptr;
    for (const ReplicaAllocation& a : result->allocations) {
      if (a.flow == row.flow && a.replica == row.replica) got = &a;
    }
    const std::string tag = absl::StrCat(row.flow, "#", row.replica);
    out.Expect(got != nullptr, tag + " missing");
    if (got == nullptr) continue;
    out.Expect(got->path == row.path, tag + " path differs");
    out.Expect(Near(got->min_b, row.min_b, 0.5),
               absl::StrCat(tag, " min_b ", got->min_b));
    out.Expect(Near(got->max_b, row.max_b, 0.5),
               absl::StrCat(tag, " max_b ", got->max_b));
    out.Expect(Near(got->per_hop_delay, row.delay, 0.02),
               absl::StrCat(tag, " delay ", got->per_hop_delay));
    out.Expect(Near(100 * got->path_reliability, row.rel_pct, 0.05),
               absl::StrCat(tag, " reliability ", 100 * got->path_reliability));
  }
  out.Expect(ms < 1000, absl::StrCat("runtime ", ms, " ms"));
  out.detail = absl::StrFormat("4 rows within tolerance, %.1f ms", ms);
  return out;
}

PlacementResult Solve(const KnowledgeBase& kb, const EnumerationLimits& limits,
                      UnitMode mode, int64_t timeout_ms) {
  const Network net(kb);
  const CandidateIndex index = BuildCandidateIndex(kb, net, limits);
  SolverConfig config;
  config.unit_mode = mode;
  config.timeout_ms = timeout_ms;
  config.features = FeatureSet::All();
  return PlaceAll(kb, index, config);
}

// Compares the solver's reported figures with the checker's recomputation.
void CompareDerived(const PlacementResult& result, const testing::CheckReport& report,
                    const std::string& tag, Outcome& out) {
  for (size_t i = 0; i < result.allocations.size(); ++i) {
    const ReplicaAllocation& a = result.allocations[i];
    const testing::Derived& d = report.derived[i];
    const std::string who = absl::StrCat(tag, " ", a.flow, "#", a.replica);
    out.Expect(Near(a.min_b, d.min_b, 1e-6), who + " min_b differs");
    out.Expect(Near(a.max_b, d.max_b, 1e-6), who + " max_b differs");
    out.Expect(Near(a.per_hop_delay, d.per_hop_delay, 1e-6), who + " delay differs");
    out.Expect(Near(a.path_reliability, d.reliability, 1e-12),
               who + " reliability differs");
  }
}

Outcome CheckerCrossValidation() {
  Outcome out;
  int success = 0, infeasible = 0, timeout = 0, allocations = 0;
  for (uint64_t seed = 1; seed <= 200; ++seed) {
    const testing::MediumInstance inst = testing::MakeMediumInstance(seed);
    const PlacementResult result =
        Solve(inst.kb, EnumerationLimits::Default(), inst.unit_mode, 10'000);
    if (result.status == PlacementStatus::kInfeasible) ++infeasible;
    if (result.status == PlacementStatus::kTimeout) ++timeout;
    if (result.status != PlacementStatus::kSuccess) continue;
    ++success;
    allocations += static_cast<int>(result.allocations.size());
    testing::CheckOptions options;
    options.unit_mode = inst.unit_mode;
    const testing::CheckReport report =
        testing::Check(inst.kb, testing::AssignmentsOf(result.allocations), options);
    for (const std::string& v : report.violations) {
      out.Expect(false, absl::StrCat("seed ", seed, ": ", v));
    }
    if (report.ok()) CompareDerived(result, report, absl::StrCat("seed ", seed), out);
  }
  out.Expect(success > 0, "no Success instance to check");
  out.detail = absl::StrFormat(
      "%d Success (%d allocations) checked, %d Infeasible, %d Timeout", success,
      allocations, infeasible, timeout);
  return out;
}

Outcome OracleEquivalence() {
  Outcome out;
  const Clock::time_point start = Clock::now();
  int feasible = 0, infeasible = 0;
  for (uint64_t seed = 1; seed <= 100; ++seed) {
    const KnowledgeBase kb = testing::SmallInstance(seed);
    const Network net(kb);
    const CandidateIndex index = BuildCandidateIndex(kb, net, testing::SmallLimits());
    SolverConfig config;
    config.features = FeatureSet::All();
    const PlacementResult result = PlaceAll(kb, index, config);
    testing::CheckOptions options;
    const testing::OracleResult oracle = testing::BruteForcePlacement(kb, index, options);
    (oracle.feasible ? feasible : infeasible)++;
    const bool solver_feasible = result.status == PlacementStatus::kSuccess;
    out.Expect(result.status != PlacementStatus::kTimeout,
               absl::StrCat("seed ", seed, " timed out"));
    out.Expect(solver_feasible == oracle.feasible,
               absl::StrCat("seed ", seed, ": solver ",
                            PlacementStatusName(result.status), ", oracle ",
                            oracle.feasible ? "feasible" : "infeasible"));
  }
  const double ms = MsSince(start);
  out.Expect(ms < 5 * 60 * 1000, absl::StrCat("runtime ", ms, " ms"));
  out.detail = absl::StrFormat("100 verdicts agree (%d feasible, %d infeasible), %.1f s",
                               feasible, infeasible, ms / 1000);
  return out;
}

Outcome ArrivalIdentity() {
  Outcome out;
  int checked = 0;
  double worst = 0;
  for (uint64_t seed = 1; checked < 1000 && seed <= 400; ++seed) {
    const testing::MediumInstance inst = testing::MakeMediumInstance(seed + 1000);
    const PlacementResult result =
        Solve(inst.kb, EnumerationLimits::Default(), inst.unit_mode, 10'000);
    if (result.status != PlacementStatus::kSuccess) continue;
    testing::CheckOptions options;
    options.unit_mode = inst.unit_mode;
    const testing::CheckReport report =
        testing::Check(inst.kb, testing::AssignmentsOf(result.allocations), options);
    for (size_t i = 0; i < result.allocations.size() && checked < 1000; ++i) {
      const ReplicaAllocation& a = result.allocations[i];
      if (!(a.min_b > 0)) continue;
      const FlowRequest& f = *inst.kb.FindFlow(a.flow);
      const double arrival =
          report.derived[i].latency + a.hop_count() * a.per_hop_delay;
      const double error = std::abs(arrival - f.min_budget());
      worst = std::max(worst, error);
      out.Expect(error <= 1e-6, absl::StrCat("seed ", seed + 1000, " ", a.flow,
                                             "#", a.replica, " off by ", error));
      ++checked;
    }
  }
  out.Expect(checked == 1000, absl::StrCat("only ", checked, " allocations"));
  out.detail = absl::StrFormat("%d allocations, max error %.3g ms", checked, worst);
  return out;
}

std::set<std::string> Transit(const std::vector<std::string>& path) {
  if (path.size() < 3) return {};
  return {path.begin() + 1, path.end() - 1};
}

bool SharesTransit(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  const std::set<std::string> ta = Transit(a);
  for (const std::string& n : Transit(b)) {
    if (ta.contains(n)) return true;
  }
  return false;
}

Outcome DisjointnessProperties() {
  Outcome out;
  int success = 0, replica_pairs = 0, affine_pairs = 0;
  for (uint64_t seed = 1; seed <= 100; ++seed) {
    GenSpec spec;
    spec.model = seed % 2 ? GraphModel::kBarabasiAlbert : GraphModel::kErdosRenyi;
    spec.node_exponent = 4 + static_cast<int>(seed % 3);
    spec.seed = MixSeed(seed, 71);
    auto kb = GenTopology(spec);
    out.Expect(kb.ok(), "topology generation failed");
    if (!kb.ok()) continue;
    FlowGenSpec flows;
    flows.count = 64;
    flows.protection_prob = 0.5;
    flows.anti_affinity_pairs = 16;
    flows.seed = MixSeed(seed, 72);
    auto generated = GenFlows(*kb, flows);
    if (!generated.ok()) continue;
    kb->flows = std::move(*generated);
    const PlacementResult result =
        Solve(*kb, EnumerationLimits::Default(), UnitMode::kRaw, 10'000);
    if (result.status != PlacementStatus::kSuccess) continue;
    ++success;
    const auto& allocs = result.allocations;
    for (size_t i = 0; i < allocs.size(); ++i) {
      for (size_t j = i + 1; j < allocs.size(); ++j) {
        const ReplicaAllocation& a = allocs[i];
        const ReplicaAllocation& b = allocs[j];
        if (a.flow == b.flow) {
          ++replica_pairs;
          out.Expect(a.path != b.path && !SharesTransit(a.path, b.path),
                     absl::StrCat("seed ", seed, ": replicas of ", a.flow, " overlap"));
          continue;
        }
        if (kb->FindFlow(a.flow)->anti_affinity.contains(b.flow)) {
          ++affine_pairs;
          out.Expect(!SharesTransit(a.path, b.path),
                     absl::StrCat("seed ", seed, ": ", a.flow, " and ", b.flow,
                                  " share a transit node"));
        }
      }
    }
  }
  out.Expect(success == 100, absl::StrCat(success, " of 100 runs succeeded"));
  out.Expect(replica_pairs > 0 && affine_pairs > 0, "no pairs exercised");
  out.detail = absl::StrFormat("%d runs, %d replica pairs, %d anti-affine pairs",
                               success, replica_pairs, affine_pairs);
  return out;
}

std::string ScratchCsv(const std::string& name) {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "dglbf_acceptance";
  std::filesystem::create_directories(dir);
  const std::filesystem::path csv = dir / (name + ".csv");
  for (const char* suffix : {".csv", ".json", ".summary.csv"}) {
    std::filesystem::remove(dir / (name + suffix));
  }
  return csv.string();
}

Outcome ScalabilityTrend() {
  Outcome out;
  const Clock::time_point start = Clock::now();
  BenchConfig config;
  config.timeout_ms = 60'000;

  GridSpec er;
  er.models = {GraphModel::kErdosRenyi};
  er.node_exponents = {7};
  er.flow_counts = {500, 2000};
  er.protection_probs = {0.25};
  er.runs = 10;
  auto trend = RunSuite(ExpandGrid(er, 2026), config, ScratchCsv("er_trend"));
  out.Expect(trend.ok(), "ER suite failed to run");
  if (!trend.ok()) return out;
  std::map<int, double> tpf;
  for (const CellAggregate& cell : trend->aggregates) {
    out.Expect(cell.successes == 10,
               absl::StrCat(cell.flows, " flows: ", cell.successes, " successes"));
    if (cell.mean_tpf_ms) tpf[cell.flows] = *cell.mean_tpf_ms;
  }
  const double ratio = tpf[2000] / tpf[500];
  out.Expect(tpf.size() == 2 && ratio <= 4, absl::StrCat("tpf ratio ", ratio));

  // BA against ER at a load where BA hubs saturate. Solve time excludes
  // candidate enumeration; medians are over Success runs.
  GridSpec both;
  both.models = {GraphModel::kBarabasiAlbert, GraphModel::kErdosRenyi};
  both.node_exponents = {5};
  both.flow_counts = {5000};
  both.protection_probs = {0.75};
  both.runs = 10;
  BenchConfig cmp = config;
  cmp.timeout_ms = 10'000;
  auto pair = RunSuite(ExpandGrid(both, 2026), cmp, ScratchCsv("ba_er"));
  out.Expect(pair.ok(), "BA/ER suite failed to run");
  if (!pair.ok()) return out;
  std::map<std::string, std::vector<double>> solve;
  for (const ExperimentRecord& r : pair->records) {
    if (r.status == PlacementStatus::kSuccess) {
      solve[r.point.model_label()].push_back(r.elapsed_ms - r.enum_ms);
    }
  }
  const double ba = Median(solve["ba"]);
  const double er_median = Median(solve["er"]);
  out.Expect(ba >= er_median,
             absl::StrFormat("median solve BA %.2f ms < ER %.2f ms", ba, er_median));
  const double ms = MsSince(start);
  out.Expect(ms < 10 * 60 * 1000, absl::StrCat("suite took ", ms, " ms"));
  out.detail = absl::StrFormat(
      "ER128 tpf %.4f -> %.4f ms (x%.2f); median solve BA %.1f ms (%zu ok) vs "
      "ER %.1f ms (%zu ok); %.1f s",
      tpf[500], tpf[2000], ratio, ba, solve["ba"].size(), er_median,
      solve["er"].size(), ms / 1000);
  return out;
}

Outcome CevVariantTrend() {
  Outcome out;
  BenchConfig config;
  config.timeout_ms = 60'000;
  std::map<int, std::vector<double>> tpf;
  double slowest_400 = 0;
  for (int flows : {150, 400}) {
    for (int run = 1; run <= 5; ++run) {
      ExperimentPoint p;
      p.workload = Workload::kCev;
      p.flow_count = flows;
      p.run = run;
      p.features = FeatureSet::All();
      p.seed = DeriveSeed(2026, p);
      const ExperimentRecord r = RunPoint(p, config);
      out.Expect(r.status == PlacementStatus::kSuccess,
                 absl::StrCat(flows, " flows run ", run, ": ",
                              PlacementStatusName(r.status)));
      if (r.tpf_ms) tpf[flows].push_back(*r.tpf_ms);
      if (flows == 400) {
        slowest_400 = std::max(slowest_400, r.elapsed_ms);
        out.Expect(r.elapsed_ms <= 30'000, absl::StrCat("400 flows took ", r.elapsed_ms));
      }
    }
  }
  const double ratio = Mean(tpf[400]) / Mean(tpf[150]);
  out.Expect(ratio <= 4, absl::StrCat("tpf ratio ", ratio));
  out.detail = absl::StrFormat("400 flows in <= %.1f ms; tpf %.4f -> %.4f ms (x%.2f)",
                               slowest_400, Mean(tpf[150]), Mean(tpf[400]), ratio);
  return out;
}

Outcome TimeoutContract() {
  Outcome out;
  ExperimentPoint p;
  p.workload = Workload::kBarabasiAlbert;
  p.node_exponent = 10;
  p.flow_count = 500;
  p.protection_prob = 0.25;
  p.features = FeatureSet::All();
  p.seed = DeriveSeed(2026, p);
  BenchConfig tight;
  tight.timeout_ms = 10;
  const ExperimentRecord timed_out = RunPoint(p, tight);
  out.Expect(timed_out.status == PlacementStatus::kTimeout,
             absl::StrCat("status ", PlacementStatusName(timed_out.status)));
  out.Expect(!timed_out.tpf_ms.has_value(), "Timeout record carries a tpf");
  out.Expect(timed_out.elapsed_ms >= 10, "elapsed below the timeout");

  BenchConfig generous;
  const ExperimentRecord finished = RunPoint(p, generous);
  out.Expect(finished.status == PlacementStatus::kSuccess,
             absl::StrCat("untimed status ", PlacementStatusName(finished.status)));
  const std::vector<CellAggregate> cells = Aggregate({timed_out, finished});
  out.Expect(cells.size() == 1, "records fall into different cells");
  if (cells.size() == 1) {
    const CellAggregate& c = cells[0];
    out.Expect(c.timeouts == 1 && c.successes == 1, "cell counts");
    out.Expect(c.mean_elapsed_ms && Near(*c.mean_elapsed_ms, finished.elapsed_ms, 1e-9),
               "mean includes the Timeout row");
  }
  const std::vector<CellAggregate> only = Aggregate({timed_out});
  out.Expect(only.size() == 1 && !only[0].mean_elapsed_ms && !only[0].mean_tpf_ms,
             "all-Timeout cell has a mean");
  out.detail = absl::StrFormat("Timeout after %.1f ms; cell mean %.1f ms from the "
                               "Success row only",
                               timed_out.elapsed_ms, finished.elapsed_ms);
  return out;
}

}  // namespace
}  // namespace dglbf

int main() {
  using dglbf::Outcome;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"table-one-regression", dglbf::TableOneRegression},
      {"checker-cross-validation", dglbf::CheckerCrossValidation},
      {"oracle-equivalence", dglbf::OracleEquivalence},
      {"arrival-time-identity", dglbf::ArrivalIdentity},
      {"disjointness-and-anti-affinity", dglbf::DisjointnessProperties},
      {"scalability-trend", dglbf::ScalabilityTrend},
      {"cev-variant-trend", dglbf::CevVariantTrend},
      {"timeout-contract", dglbf::TimeoutContract},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const Outcome o = run();
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    for (const std::string& f : o.failures) std::printf("    %s\n", f.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
