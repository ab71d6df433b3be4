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

#include "dglbf/cli.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "dglbf/bench.h"
#include "dglbf/kb.h"
#include "dglbf/network.h"
#include "dglbf/pathgen.h"
#include "dglbf/rng.h"
#include "dglbf/report.h"
#include "dglbf/solver.h"
#include "dglbf/topogen.h"

namespace dglbf {
namespace {

constexpr uint64_t kDefaultSeed = 1;

struct LimitFlags {
  int max_hops = 0;
  int max_candidates = 0;
  int hop_slack = 3;
  bool unbounded = false;
  CLI::Option* max_hops_opt = nullptr;
  CLI::Option* max_candidates_opt = nullptr;
  CLI::Option* hop_slack_opt = nullptr;

  void Register(CLI::App* app) {
    max_hops_opt = app->add_option("--max-hops", max_hops,
                                   "Absolute cap on candidate hop count")
                       ->check(CLI::PositiveNumber);
    max_candidates_opt =
        app->add_option("--max-candidates", max_candidates,
                        "Candidates kept per endpoint pair (default 64)")
            ->check(CLI::PositiveNumber);
    hop_slack_opt = app->add_option("--hop-slack", hop_slack,
                                    "Hops allowed beyond the shortest (default 3)")
                        ->check(CLI::NonNegativeNumber);
    app->add_flag("--unbounded", unbounded,
                  "Enumerate every simple path (small graphs only)");
  }

  EnumerationLimits Build() const {
    EnumerationLimits limits =
        unbounded ? EnumerationLimits::Unbounded() : EnumerationLimits::Default();
    if (max_hops_opt->count() > 0) limits.max_hops = max_hops;
    if (max_candidates_opt->count() > 0) limits.max_candidates_per_pair = max_candidates;
    if (hop_slack_opt->count() > 0) limits.hop_slack = hop_slack;
    return limits;
  }
};

// --seed, else $DGLBF_SEED, else the default.
absl::StatusOr<uint64_t> ResolveSeed(const CLI::Option* flag, uint64_t value) {
  if (flag->count() > 0) return value;
  if (const char* env = std::getenv("DGLBF_SEED"); env && *env) {
    uint64_t seed;
    if (!absl::SimpleAtoi(env, &seed)) {
      return absl::InvalidArgumentError(
          absl::StrCat("DGLBF_SEED is not an unsigned integer: '", env, "'"));
    }
    return seed;
  }
  return kDefaultSeed;
}

std::vector<std::string> InputFiles(const std::string& topology,
                                    const std::vector<std::string>& flows) {
  std::vector<std::string> files = {topology};
  files.insert(files.end(), flows.begin(), flows.end());
  return files;
}

absl::Status WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) return absl::UnavailableError(absl::StrCat("cannot write ", path));
  out << text;
  if (!out) return absl::UnavailableError(absl::StrCat("error writing ", path));
  return absl::OkStatus();
}

class Cli {
 public:
  Cli(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int Run(int argc, const char* const* argv) {
    CLI::App app("Latency-budgeted path placement for guaranteed latency-based "
                 "forwarding.",
                 "dglbf");
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Help for every subcommand");

    CLI::App* place = app.add_subcommand("place", "Place flows on a topology");
    place->add_option("--topology", topology_, "Topology facts or JSON file")
        ->required();
    place->add_option("--flows", flow_files_, "Flow request file(s)");
    place->add_option("--features", features_,
                      "plain|reliability|protection|anti-affinity|all, "
                      "comma-combinable")
        ->default_val("all");
    place->add_option("--unit-mode", unit_mode_, "raw|si")->default_val("raw");
    place->add_option("--timeout-ms", timeout_ms_, "Solver timeout")
        ->default_val(1'800'000)
        ->check(CLI::PositiveNumber);
    CLI::Option* place_seed =
        place->add_option("--seed", seed_, "Seed (placement is deterministic)");
    place->add_option("--format", format_, "table|json|csv")->default_val("table");
    place->add_option("--search", search_, "cbj|chrono")->default_val("cbj");
    limits_.Register(place);

    CLI::App* gen = app.add_subcommand("gen", "Generate a random instance");
    gen->add_option("--model", model_, "ba|er")->default_val("ba");
    gen->add_option("--exp", exponent_, "Node exponent i (2^i nodes)")
        ->default_val(4);
    gen->add_option("--flows", flow_count_, "Number of flows")->default_val(500);
    gen->add_option("--prot", prot_, "Probability a flow needs 1+1 protection")
        ->default_val(0.25);
    gen->add_option("--er-prob", er_prob_, "ER edge probability")
        ->default_val(0.7);
    CLI::Option* ba_degree =
        gen->add_option("--ba-degree", ba_degree_, "BA attachment (default i)");
    CLI::Option* gen_seed = gen->add_option("--seed", seed_, "Seed");
    gen->add_option("--out-dir", out_dir_, "Directory for topology.pl and flows.pl")
        ->default_val(".");

    CLI::App* bench = app.add_subcommand("bench", "Run an experiment grid");
    bench->add_option("--suite", suite_, "grid|cev")->default_val("grid");
    bench->add_option("--models", models_, "ba,er")->delimiter(',');
    bench->add_option("--exp", exponents_, "Node exponents")->delimiter(',');
    bench->add_option("--flows", flow_counts_, "Flow counts")->delimiter(',');
    bench->add_option("--prot", probs_, "Protection probabilities")->delimiter(',');
    bench->add_option("--runs", runs_, "Runs per cell")->default_val(10);
    bench->add_option("--timeout-ms", timeout_ms_, "Per-point timeout")
        ->default_val(1'800'000)
        ->check(CLI::PositiveNumber);
    bench->add_option("--parallel", parallel_, "Worker threads")->default_val(1);
    bench->add_option("--out", out_path_, "Result CSV (appended, resumable)")
        ->required();
    bench->add_option("--unit-mode", unit_mode_, "raw|si")->default_val("raw");
    bench->add_option("--er-prob", er_prob_, "ER edge probability")
        ->default_val(0.7);
    CLI::Option* bench_seed = bench->add_option("--seed", seed_, "Master seed");
    limits_.Register(bench);

    CLI::App* validate =
        app.add_subcommand("validate", "Check a knowledge base for errors");
    validate->add_option("--topology", topology_, "Topology file")->required();
    validate->add_option("--flows", flow_files_, "Flow request file(s)");

    CLI::App* paths = app.add_subcommand("paths", "List candidate paths");
    paths->add_option("--topology", topology_, "Topology file")->required();
    paths->add_option("--src", src_, "Source node")->required();
    paths->add_option("--dst", dst_, "Destination node")->required();
    limits_.Register(paths);

    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out_, err_);
      return code == 0 ? kExitSuccess : kExitError;
    }

    if (place->parsed()) return Place(place_seed);
    if (gen->parsed()) return Gen(gen_seed, ba_degree);
    if (bench->parsed()) return Bench(bench_seed);
    if (validate->parsed()) return Validate();
    return Paths();
  }

 private:
  int Fail(const absl::Status& status) {
    err_ << "error: " << status.message() << "\n";
    return kExitError;
  }

  int Place(const CLI::Option* seed_flag) {
    auto seed = ResolveSeed(seed_flag, seed_);
    if (!seed.ok()) return Fail(seed.status());
    auto features = ParseFeatures(features_);
    if (!features.ok()) return Fail(features.status());
    auto unit = ParseUnitMode(unit_mode_);
    if (!unit.ok()) return Fail(unit.status());
    auto format = ParseOutputFormat(format_);
    if (!format.ok()) return Fail(format.status());
    if (search_ != "cbj" && search_ != "chrono") {
      return Fail(absl::InvalidArgumentError("--search must be cbj or chrono"));
    }
    auto kb = LoadKbFiles(InputFiles(topology_, flow_files_));
    if (!kb.ok()) return Fail(kb.status());

    const Network network(*kb);
    const CandidateIndex index =
        BuildCandidateIndex(*kb, network, limits_.Build());
    SolverConfig config;
    config.unit_mode = *unit;
    config.timeout_ms = timeout_ms_;
    config.features = *features;
    config.search =
        search_ == "chrono" ? SearchMode::kChronological : SearchMode::kBackjumping;
    const PlacementResult result = PlaceAll(*kb, index, config);
    switch (*format) {
      case OutputFormat::kTable:
        out_ << FormatTable(result);
        break;
      case OutputFormat::kJson:
        out_ << PlacementToJson(result);
        break;
      case OutputFormat::kCsv:
        out_ << PlacementToCsv(result);
        break;
    }
    switch (result.status) {
      case PlacementStatus::kSuccess:
        return kExitSuccess;
      case PlacementStatus::kInfeasible:
        return kExitInfeasible;
      case PlacementStatus::kTimeout:
        return kExitTimeout;
    }
    return kExitError;
  }

  int Gen(const CLI::Option* seed_flag, const CLI::Option* ba_degree_flag) {
    auto seed = ResolveSeed(seed_flag, seed_);
    if (!seed.ok()) return Fail(seed.status());
    auto model = ParseGraphModel(model_);
    if (!model.ok()) return Fail(model.status());
    GenSpec spec;
    spec.model = *model;
    spec.node_exponent = exponent_;
    spec.er_prob = er_prob_;
    spec.seed = MixSeed(*seed, 1);
    if (ba_degree_flag->count() > 0) spec.ba_degree = ba_degree_;
    auto kb = GenTopology(spec);
    if (!kb.ok()) return Fail(kb.status());
    if (!spec.paper_parameters()) {
      err_ << "warning: non-paper parameter: node exponent " << exponent_
           << " is outside [4, 10]\n";
    }
    FlowGenSpec flow_spec;
    flow_spec.count = flow_count_;
    flow_spec.protection_prob = prot_;
    flow_spec.seed = MixSeed(*seed, 2);
    auto flows = GenFlows(*kb, flow_spec);
    if (!flows.ok()) return Fail(flows.status());

    KnowledgeBase flow_kb;
    flow_kb.flows = std::move(*flows);
    std::error_code ec;
    std::filesystem::create_directories(out_dir_, ec);
    const std::string topo_path = out_dir_ + "/topology.pl";
    const std::string flows_path = out_dir_ + "/flows.pl";
    if (absl::Status s = WriteText(topo_path, ToFacts(*kb)); !s.ok()) return Fail(s);
    if (absl::Status s = WriteText(flows_path, ToFacts(flow_kb)); !s.ok()) {
      return Fail(s);
    }
    out_ << "wrote " << topo_path << " (" << kb->nodes.size() << " nodes, "
         << kb->links.size() << " links) and " << flows_path << " ("
         << flow_kb.flows.size() << " flows)\n";
    return kExitSuccess;
  }

  int Bench(const CLI::Option* seed_flag) {
    auto seed = ResolveSeed(seed_flag, seed_);
    if (!seed.ok()) return Fail(seed.status());
    auto unit = ParseUnitMode(unit_mode_);
    if (!unit.ok()) return Fail(unit.status());
    std::vector<ExperimentPoint> points;
    if (suite_ == "cev") {
      points = CevVariantGrid(runs_, *seed);
    } else if (suite_ == "grid") {
      GridSpec grid;
      if (!models_.empty()) {
        grid.models.clear();
        for (const std::string& m : models_) {
          auto model = ParseGraphModel(m);
          if (!model.ok()) return Fail(model.status());
          grid.models.push_back(*model);
        }
      }
      if (!exponents_.empty()) grid.node_exponents = exponents_;
      grid.flow_counts = flow_counts_;
      if (!probs_.empty()) grid.protection_probs = probs_;
      grid.runs = runs_;
      points = ExpandGrid(grid, *seed);
    } else {
      return Fail(absl::InvalidArgumentError("--suite must be grid or cev"));
    }
    BenchConfig config;
    config.timeout_ms = timeout_ms_;
    config.unit_mode = *unit;
    config.limits = limits_.Build();
    config.er_prob = er_prob_;
    config.parallelism = parallel_;
    auto suite = RunSuite(points, config, out_path_);
    if (!suite.ok()) return Fail(suite.status());
    out_ << "points: " << points.size() << " (" << suite->skipped
         << " already recorded)\n";
    out_ << AggregatesToCsv(suite->aggregates);
    return kExitSuccess;
  }

  int Validate() {
    auto kb = LoadKbFiles(InputFiles(topology_, flow_files_));
    if (!kb.ok()) return Fail(kb.status());
    out_ << "valid: " << kb->nodes.size() << " nodes, " << kb->links.size()
         << " links, " << kb->flows.size() << " flows\n";
    return kExitSuccess;
  }

  int Paths() {
    auto kb = LoadKbFiles({topology_});
    if (!kb.ok()) return Fail(kb.status());
    const Network network(*kb);
    for (const std::string& id : {src_, dst_}) {
      if (!network.FindNode(id)) {
        return Fail(absl::NotFoundError(absl::StrCat("unknown node ", id)));
      }
    }
    const std::vector<CandidatePath> paths =
        EnumerateCandidates(network, src_, dst_, limits_.Build());
    out_ << CandidatesToFacts(paths);
    return kExitSuccess;
  }

  std::ostream& out_;
  std::ostream& err_;

  std::string topology_;
  std::vector<std::string> flow_files_;
  std::string features_;
  std::string unit_mode_;
  int64_t timeout_ms_ = 1'800'000;
  uint64_t seed_ = kDefaultSeed;
  std::string format_;
  std::string search_;
  LimitFlags limits_;

  std::string model_;
  int exponent_ = 4;
  int flow_count_ = 500;
  double prot_ = 0.25;
  double er_prob_ = 0.7;
  int ba_degree_ = 0;
  std::string out_dir_;

  std::string suite_;
  std::vector<std::string> models_;
  std::vector<int> exponents_;
  std::vector<int> flow_counts_;
  std::vector<double> probs_;
  int runs_ = 10;
  int parallel_ = 1;
  std::string out_path_;

  std::string src_;
  std::string dst_;
};

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  Cli cli(out, err);
  return cli.Run(argc, argv);
}

}  // namespace dglbf
