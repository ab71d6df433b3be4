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

#include <map>
#include <string>
#include <vector>

#include "dglbf/constraints.h"
#include "dglbf/pathgen.h"
#include "dglbf/rng.h"
#include "dglbf/topogen.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "support/brute_force.h"
#include "support/checker.h"
#include "support/instances.h"

namespace dglbf {
namespace {

using ::testing::ElementsAre;
using Nodes = std::vector<std::string>;

FlowRequest Flow(const std::string& id, const std::string& src, const std::string& dst,
                 double rate, double budget, double tolerance) {
  FlowRequest f;
  f.id = id;
  f.src = src;
  f.dst = dst;
  f.pkt_size = 0.01;
  f.rate = rate;
  f.latency_budget = budget;
  f.tolerance = tolerance;
  return f;
}

// a -> b -> c with d_proc 4 on every node, d_prop 3, bandwidth 250.
KnowledgeBase Chain() {
  KnowledgeBase kb;
  kb.nodes = {{"a", 4}, {"b", 4}, {"c", 4}};
  kb.links = {{"a", "b", 3, 250, 0.9928}, {"b", "c", 3, 250, 0.9913}};
  return kb;
}

// s -> {x, y} -> t with room for one 6 Mbps flow per branch.
KnowledgeBase Diamond() {
  KnowledgeBase kb;
  kb.nodes = {{"s", 0}, {"x", 1}, {"y", 1}, {"t", 0}};
  kb.links = {{"s", "x", 1, 10, 1}, {"x", "t", 1, 10, 1},
              {"s", "y", 2, 10, 1}, {"y", "t", 2, 10, 1}};
  return kb;
}

PlacementResult Solve(const KnowledgeBase& kb, const SolverConfig& config = {},
                      const EnumerationLimits& limits = EnumerationLimits::Unbounded()) {
  const Network net(kb);
  return PlaceAll(kb, BuildCandidateIndex(kb, net, limits), config);
}

TEST(HopOkTest, Examples) {
  const KnowledgeBase kb = Chain();
  const Network net(kb);
  const FlowRequest f = Flow("f", "a", "c", 10, 60, 10);
  const LinkIndex ab = net.FindLink(0, 1).value();
  EXPECT_NEAR(HopOk(net, ab, 0, f, 50, UnitMode::kRaw).value(), 42.99996, 1e-12);
  EXPECT_FALSE(HopOk(net, ab, 245, f, 50, UnitMode::kRaw).has_value());
  EXPECT_FALSE(HopOk(net, ab, 240, f, 50, UnitMode::kRaw).has_value());
  EXPECT_TRUE(HopOk(net, ab, 239.5, f, 50, UnitMode::kRaw).has_value());
}

TEST(HopOkTest, ResultMayBeNegative) {
  const KnowledgeBase kb = Chain();
  const Network net(kb);
  const FlowRequest f = Flow("f", "a", "c", 10, 60, 10);
  EXPECT_LT(HopOk(net, 0, 0, f, 2, UnitMode::kRaw).value(), 0);
}

TEST(HopOkTest, SiModeScalesTransmission) {
  const KnowledgeBase kb = Chain();
  const Network net(kb);
  const FlowRequest f = Flow("f", "a", "c", 10, 60, 10);
  EXPECT_NEAR(HopOk(net, 0, 0, f, 50, UnitMode::kSi).value(), 50 - 4 - 0.04 - 3, 1e-12);
  EXPECT_DOUBLE_EQ(TransmissionDelay(0.01, 250, UnitMode::kRaw), 0.00004);
  EXPECT_DOUBLE_EQ(TransmissionDelay(0.01, 250, UnitMode::kSi), 0.04);
}

TEST(PathOkTest, TwoHopFold) {
  KnowledgeBase kb = Chain();
  const Network net(kb);
  const FlowRequest f = Flow("f", "a", "c", 10, 60, 10);
  const std::vector<LinkIndex> links = {0, 1};
  const std::vector<double> loads(2, 0.0);
  auto scan = PathOk(net, links, 50, loads, f, UnitMode::kRaw, true);
  ASSERT_TRUE(scan.has_value());
  EXPECT_NEAR(scan->remaining_min_budget, 36, 0.01);
  EXPECT_NEAR(scan->running_reliability, 0.9928 * 0.9913, 1e-15);
}

TEST(PathOkTest, Failures) {
  const KnowledgeBase kb = Chain();
  const Network net(kb);
  FlowRequest f = Flow("f", "a", "c", 10, 60, 10);
  const std::vector<LinkIndex> links = {0, 1};
  const std::vector<double> full = {0, 245};
  EXPECT_FALSE(PathOk(net, links, 50, full, f, UnitMode::kRaw, true).has_value());

  const std::vector<double> loads(2, 0.0);
  f.req_rel = 0.99;
  EXPECT_FALSE(PathOk(net, links, 50, loads, f, UnitMode::kRaw, true).has_value());
  EXPECT_TRUE(PathOk(net, std::vector<LinkIndex>{0}, 50, loads, f, UnitMode::kRaw, true)
                  .has_value());
  EXPECT_TRUE(PathOk(net, links, 50, loads, f, UnitMode::kRaw, false).has_value());
}

TEST(AdditionalDelayTest, Examples) {
  const DelayAssignment a = AdditionalDelay({75, 1}, 3);
  EXPECT_DOUBLE_EQ(a.per_hop_delay, 25);
  EXPECT_DOUBLE_EQ(a.min_b, 75);
  EXPECT_NEAR(AdditionalDelay({7, 1}, 6).per_hop_delay, 1.1667, 1e-4);
  const DelayAssignment zero = AdditionalDelay({0, 1}, 6);
  EXPECT_EQ(zero.per_hop_delay, 0);
  EXPECT_EQ(zero.min_b, 0);
  const DelayAssignment late = AdditionalDelay({-3.5, 1}, 2);
  EXPECT_EQ(late.per_hop_delay, 0);
  EXPECT_EQ(late.min_b, -3.5);
}

KnowledgeBase TwoNode(double tolerance) {
  KnowledgeBase kb;
  kb.nodes = {{"a", 0}, {"b", 0}};
  kb.links = {{"a", "b", 1, 250, 1}};
  kb.flows = {Flow("f", "a", "b", 1, 50, tolerance)};
  return kb;
}

ReplicaAllocation Alloc(const std::string& flow, int replica, Nodes path, double min_b) {
  ReplicaAllocation a;
  a.flow = flow;
  a.replica = replica;
  a.path = std::move(path);
  a.min_b = min_b;
  return a;
}

TEST(ValidPathsTest, Examples) {
  auto ok = ValidPaths(TwoNode(10), {Alloc("f", 1, {"a", "b"}, 75)}, UnitMode::kRaw, 0);
  ASSERT_TRUE(ok.ok()) << ok.status();
  EXPECT_DOUBLE_EQ((*ok)[0].max_b, 95);
  auto late = ValidPaths(TwoNode(10), {Alloc("f", 1, {"a", "b"}, -5)}, UnitMode::kRaw, 0);
  ASSERT_TRUE(late.ok()) << late.status();
  EXPECT_DOUBLE_EQ((*late)[0].max_b, 15);
}

// g queues six 2 Mb packets ahead of f on a 1 Mbps link: 12 ms against a 10 ms window.
TEST(ValidPathsTest, QueueExceedingWindowFails) {
  KnowledgeBase kb = TwoNode(5);
  kb.links[0].bandwidth = 1;
  kb.flows[0].burst_size = 1;
  kb.flows.push_back(Flow("g", "a", "b", 0.1, 50, 5));
  kb.flows[1].burst_size = 6;
  kb.flows[1].pkt_size = 2;
  kb.flows[0].rate = 0.1;
  auto q = TotQTime(kb, std::vector<ReplicaAllocation>{Alloc("f", 1, {"a", "b"}, 0),
                                                       Alloc("g", 1, {"a", "b"}, 0)},
                    0, UnitMode::kRaw);
  ASSERT_TRUE(q.ok()) << q.status();
  EXPECT_DOUBLE_EQ(*q, 12);
  auto result = ValidPaths(
      kb, {Alloc("f", 1, {"a", "b"}, 0), Alloc("g", 1, {"a", "b"}, 20)}, UnitMode::kRaw, 0);
  ASSERT_FALSE(result.ok());
  EXPECT_THAT(std::string(result.status().message()), ::testing::HasSubstr("f replica 1"));
}

TEST(TotQTimeTest, Examples) {
  KnowledgeBase kb;
  kb.nodes = {{"a", 0}, {"b", 0}, {"c", 0}};
  kb.links = {{"a", "b", 1, 250, 1}, {"b", "c", 1, 1000, 1}};
  FlowRequest f = Flow("f", "a", "b", 1, 50, 5);
  f.burst_size = 4;
  FlowRequest g = Flow("g", "a", "c", 1, 50, 5);
  g.burst_size = 3;
  g.pkt_size = 0.008;
  kb.flows = {f, g};
  const std::vector<ReplicaAllocation> allocs = {Alloc("f", 1, {"a", "b"}, 0),
                                                 Alloc("g", 1, {"a", "b", "c"}, 0)};
  EXPECT_NEAR(TotQTime(kb, allocs, 0, UnitMode::kRaw).value(), 2.16e-4, 1e-15);
  EXPECT_NEAR(TotQTime(kb, allocs, 0, UnitMode::kSi).value(), 0.216, 1e-12);
  // g sees f on the first hop only, plus its own burst on both.
  EXPECT_NEAR(TotQTime(kb, allocs, 1, UnitMode::kRaw).value(),
              (2 * 0.008 + 4 * 0.01) / 250 + 2 * 0.008 / 1000, 1e-15);
  EXPECT_FALSE(TotQTime(kb, allocs, 2, UnitMode::kRaw).ok());

  kb.flows[0].burst_size = 1;
  EXPECT_EQ(TotQTime(kb, std::vector<ReplicaAllocation>{allocs[0]}, 0, UnitMode::kRaw).value(), 0);
}

TEST(EligiblePathTest, MinBudgetIsBudgetMinusTolerance) {
  KnowledgeBase kb = TwoNode(10);
  kb.flows[0].latency_budget = 100;
  const FlowRequest& f = kb.flows[0];
  EXPECT_EQ(f.min_budget(), 90);
  const std::vector<CandidatePath> candidates = {{"p", "a", "b", {"a", "b"}}};
  auto a = EligiblePath(kb, f, 1, {}, candidates, SolverConfig{});
  ASSERT_TRUE(a.has_value());
  EXPECT_NEAR(a->min_b, 90 - 1 - 0.01 / 250, 1e-12);
  EXPECT_DOUBLE_EQ(a->per_hop_delay, a->min_b);
}

TEST(EligiblePathTest, ToleranceEqualToBudget) {
  KnowledgeBase kb = TwoNode(50);
  const std::vector<CandidatePath> candidates = {{"p", "a", "b", {"a", "b"}}};
  auto a = EligiblePath(kb, kb.flows[0], 1, {}, candidates, SolverConfig{});
  ASSERT_TRUE(a.has_value());
  EXPECT_EQ(a->per_hop_delay, 0);
  EXPECT_NEAR(a->min_b, -1 - 0.01 / 250, 1e-12);
}

TEST(EligiblePathTest, RateAboveFreeBandwidth) {
  KnowledgeBase kb = TwoNode(10);
  kb.flows[0].rate = 250;
  const std::vector<CandidatePath> candidates = {{"p", "a", "b", {"a", "b"}}};
  EXPECT_FALSE(EligiblePath(kb, kb.flows[0], 1, {}, candidates, SolverConfig{}).has_value());
}

TEST(PlaceAllTest, CevExampleTable) {
  auto kb = LoadCevExample();
  ASSERT_TRUE(kb.ok()) << kb.status();
  const PlacementResult result = Solve(*kb, {}, EnumerationLimits::Default());
  ASSERT_EQ(result.status, PlacementStatus::kSuccess);
  ASSERT_EQ(result.allocations.size(), 4);
  const ReplicaAllocation& r1 = result.allocations[1];
  const ReplicaAllocation& r2 = result.allocations[2];
  EXPECT_EQ(r1.flow, "f2");
  EXPECT_THAT(r1.path, ElementsAre("ns12", "ns21", "ns31", "ns6"));
  EXPECT_NEAR(r1.min_b, 75, 0.5);
  EXPECT_NEAR(r1.max_b, 95, 0.5);
  EXPECT_NEAR(r1.per_hop_delay, 25, 0.5);
  EXPECT_EQ(r2.flow, "f2");
  EXPECT_EQ(r2.replica, 2);
  EXPECT_THAT(r2.path, ElementsAre("ns12", "ns22", "ns32", "ns6"));
  EXPECT_NEAR(r2.min_b, 71, 0.5);
  EXPECT_NEAR(r2.max_b, 91, 0.5);
  EXPECT_NEAR(r2.per_hop_delay, 23.7, 0.5);
  EXPECT_NEAR(result.route_reliability.at("f2"),
              RouteReliability(std::vector<double>{r1.path_reliability, r2.path_reliability}),
              1e-15);
}

TEST(PlaceAllTest, NoCandidateIsInfeasible) {
  KnowledgeBase kb;
  kb.nodes = {{"a", 0}, {"b", 0}};
  kb.links = {{"b", "a", 1, 10, 1}};
  kb.flows = {Flow("f", "a", "b", 1, 50, 5)};
  const PlacementResult result = Solve(kb);
  EXPECT_EQ(result.status, PlacementStatus::kInfeasible);
  EXPECT_EQ(result.blocking_flow, "f");
  EXPECT_TRUE(result.allocations.empty());
}

TEST(PlaceAllTest, NoFlowsIsSuccess) {
  const PlacementResult result = Solve(Diamond());
  EXPECT_EQ(result.status, PlacementStatus::kSuccess);
  EXPECT_TRUE(result.allocations.empty());
}

TEST(PlaceAllTest, DiamondMatchesOracle) {
  KnowledgeBase kb = Diamond();
  kb.flows = {Flow("f1", "s", "t", 6, 20, 5), Flow("f2", "s", "t", 6, 20, 5)};
  const Network net(kb);
  const CandidateIndex index = BuildCandidateIndex(kb, net, EnumerationLimits::Unbounded());
  const PlacementResult two = PlaceAll(kb, index, {});
  ASSERT_EQ(two.status, PlacementStatus::kSuccess);
  EXPECT_NE(two.allocations[0].path, two.allocations[1].path);
  EXPECT_TRUE(testing::BruteForcePlacement(kb, index, {}).feasible);

  kb.flows.push_back(Flow("f3", "s", "t", 6, 20, 5));
  const PlacementResult three = PlaceAll(kb, index, {});
  EXPECT_EQ(three.status, PlacementStatus::kInfeasible);
  EXPECT_FALSE(testing::BruteForcePlacement(kb, index, {}).feasible);
}

// f1 takes the short branch first, so f2 (which only fits on it) forces a
// backtrack.
TEST(PlaceAllTest, BacktracksOverEarlierChoice) {
  KnowledgeBase kb = Diamond();
  kb.flows = {Flow("f1", "s", "t", 6, 20, 15), Flow("f2", "s", "t", 6, 5, 0)};
  const PlacementResult result = Solve(kb);
  ASSERT_EQ(result.status, PlacementStatus::kSuccess);
  EXPECT_THAT(result.allocations[0].path, ElementsAre("s", "y", "t"));
  EXPECT_THAT(result.allocations[1].path, ElementsAre("s", "x", "t"));
  EXPECT_GT(result.stats.backtracks, 0);
}

TEST(PlaceAllTest, ProtectedFlowGetsDisjointReplicas) {
  KnowledgeBase kb = Diamond();
  FlowRequest f = Flow("f", "s", "t", 1, 20, 5);
  f.replica_factor = 2;
  kb.flows = {f};
  const PlacementResult result = Solve(kb);
  ASSERT_EQ(result.status, PlacementStatus::kSuccess);
  ASSERT_EQ(result.allocations.size(), 2);
  EXPECT_EQ(result.allocations[0].replica, 1);
  EXPECT_EQ(result.allocations[1].replica, 2);
  EXPECT_TRUE(PathProtection(result.allocations[0].path, result.allocations[1].path));

  kb.flows[0].replica_factor = 3;
  EXPECT_EQ(Solve(kb).status, PlacementStatus::kInfeasible);
  SolverConfig plain;
  plain.features = FeatureSet::Plain();
  const PlacementResult single = Solve(kb, plain);
  ASSERT_EQ(single.status, PlacementStatus::kSuccess);
  EXPECT_EQ(single.allocations.size(), 1);
}

TEST(PlaceAllTest, AntiAffinityForcesSeparateBranches) {
  KnowledgeBase kb = Diamond();
  kb.flows = {Flow("f1", "s", "t", 1, 20, 15), Flow("f2", "s", "t", 1, 20, 15)};
  kb.flows[1].anti_affinity = {"f1"};
  const PlacementResult result = Solve(kb);
  ASSERT_EQ(result.status, PlacementStatus::kSuccess);
  EXPECT_NE(result.allocations[0].path, result.allocations[1].path);
}

TEST(PlaceAllTest, ZeroTimeoutIsTimeout) {
  auto kb = LoadCevExample();
  ASSERT_TRUE(kb.ok()) << kb.status();
  SolverConfig config;
  config.timeout_ms = 0;
  const PlacementResult result = Solve(*kb, config, EnumerationLimits::Default());
  EXPECT_EQ(result.status, PlacementStatus::kTimeout);
  EXPECT_TRUE(result.allocations.empty());
}

TEST(PlaceAllTest, MatchesOracleOnSmallInstances) {
  for (uint64_t seed = 1; seed <= 150; ++seed) {
    const KnowledgeBase kb = testing::SmallInstance(seed);
    const Network net(kb);
    const CandidateIndex index = BuildCandidateIndex(kb, net, testing::SmallLimits());
    const PlacementResult result = PlaceAll(kb, index, {});
    const testing::OracleResult oracle = testing::BruteForcePlacement(kb, index, {});
    ASSERT_NE(result.status, PlacementStatus::kTimeout);
    EXPECT_EQ(result.status == PlacementStatus::kSuccess, oracle.feasible) << "seed " << seed;
    if (result.status == PlacementStatus::kSuccess) {
      const testing::CheckReport report =
          testing::Check(kb, testing::AssignmentsOf(result.allocations), {});
      EXPECT_TRUE(report.ok()) << "seed " << seed << ": " << report.violations.front();
    }
  }
}

TEST(PlaceAllTest, SearchModesAgree) {
  for (uint64_t seed = 1; seed <= 200; ++seed) {
    const KnowledgeBase kb = testing::SmallInstance(seed);
    const Network net(kb);
    const CandidateIndex index = BuildCandidateIndex(kb, net, testing::SmallLimits());
    SolverConfig chrono;
    chrono.search = SearchMode::kChronological;
    const PlacementResult a = PlaceAll(kb, index, {});
    const PlacementResult b = PlaceAll(kb, index, chrono);
    EXPECT_EQ(a.status, b.status) << "seed " << seed;
    EXPECT_EQ(a.allocations, b.allocations) << "seed " << seed;
    EXPECT_LE(a.stats.candidates_tried, b.stats.candidates_tried) << "seed " << seed;
  }
}

TEST(PlaceAllTest, IsDeterministic) {
  const testing::MediumInstance m = testing::MakeMediumInstance(4);
  SolverConfig config;
  config.unit_mode = m.unit_mode;
  const PlacementResult a = Solve(m.kb, config, EnumerationLimits::Default());
  const PlacementResult b = Solve(m.kb, config, EnumerationLimits::Default());
  EXPECT_EQ(a.status, b.status);
  EXPECT_EQ(a.allocations, b.allocations);
  EXPECT_EQ(a.link_loads, b.link_loads);
  EXPECT_EQ(a.stats.backtracks, b.stats.backtracks);
}

TEST(PlaceAllTest, AddingAFlowNeverRestoresFeasibility) {
  int refuted = 0;
  for (uint64_t seed = 1; seed <= 200; ++seed) {
    KnowledgeBase kb = testing::SmallInstance(seed);
    const Network net(kb);
    Rng rng(seed);
    const size_t n = kb.nodes.size();
    FlowRequest extra = Flow("extra", kb.nodes[rng.Below(n)].id, "", 3, 15, 3);
    do {
      extra.dst = kb.nodes[rng.Below(n)].id;
    } while (extra.dst == extra.src);
    std::vector<FlowRequest> all = kb.flows;
    all.push_back(extra);
    const CandidateIndex index = BuildCandidateIndex(kb, net, all, testing::SmallLimits());
    if (PlaceAll(kb, index, {}).status != PlacementStatus::kInfeasible) continue;
    ++refuted;
    kb.flows = all;
    EXPECT_EQ(PlaceAll(kb, index, {}).status, PlacementStatus::kInfeasible) << "seed " << seed;
  }
  EXPECT_GT(refuted, 50);
}

TEST(PlaceAllTest, CapacityAndArrivalIdentity) {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    const testing::MediumInstance m = testing::MakeMediumInstance(seed);
    SolverConfig config;
    config.unit_mode = m.unit_mode;
    const PlacementResult result = Solve(m.kb, config, EnumerationLimits::Default());
    if (result.status != PlacementStatus::kSuccess) continue;
    const Network net(m.kb);
    std::map<LinkIndex, double> load;
    for (const ReplicaAllocation& a : result.allocations) {
      const FlowRequest* f = m.kb.FindFlow(a.flow);
      const auto links = net.ResolvePath(a.path).value();
      double latency = 0;
      for (LinkIndex l : links) {
        load[l] += f->rate;
        latency += net.d_proc(net.link_dst(l)) +
                   TransmissionDelay(f->pkt_size, net.link(l).bandwidth, m.unit_mode) +
                   net.link(l).d_prop;
      }
      if (a.min_b > 0) {
        EXPECT_NEAR(latency + a.hop_count() * a.per_hop_delay, f->min_budget(), 1e-6);
      }
      EXPECT_GE(a.max_b, -config.epsilon);
    }
    for (const auto& [l, rate] : load) {
      EXPECT_LT(rate, net.link(l).bandwidth);
      const auto key = std::make_pair(net.node_id(net.link_src(l)), net.node_id(net.link_dst(l)));
      EXPECT_DOUBLE_EQ(result.link_loads.at(key), rate);
    }
    EXPECT_EQ(result.link_loads.size(), load.size());
  }
}

// Only the transmission term depends on the unit mode.
TEST(PlaceAllTest, UnitModeChangesTransmissionOnly) {
  KnowledgeBase kb = Chain();
  kb.flows = {Flow("f", "a", "c", 10, 60, 10)};
  SolverConfig si;
  si.unit_mode = UnitMode::kSi;
  const PlacementResult raw_result = Solve(kb);
  const PlacementResult si_result = Solve(kb, si);
  ASSERT_EQ(raw_result.status, PlacementStatus::kSuccess);
  ASSERT_EQ(si_result.status, PlacementStatus::kSuccess);
  EXPECT_NEAR(raw_result.allocations[0].min_b - si_result.allocations[0].min_b,
              2 * (0.04 - 0.00004), 1e-12);
}

TEST(ParseTest, NamesRoundTrip) {
  EXPECT_EQ(ParseUnitMode("si").value(), UnitMode::kSi);
  EXPECT_EQ(ParseUnitMode(UnitModeName(UnitMode::kRaw)).value(), UnitMode::kRaw);
  EXPECT_FALSE(ParseUnitMode("ms").ok());
  EXPECT_EQ(ParseFeatures("all").value(), FeatureSet::All());
  EXPECT_EQ(ParseFeatures("plain").value(), FeatureSet::Plain());
  for (const char* name : {"all", "plain"}) {
    EXPECT_EQ(FeatureSetName(ParseFeatures(name).value()), name);
  }
  EXPECT_FALSE(ParseFeatures("bogus").ok());
  EXPECT_EQ(PlacementStatusName(PlacementStatus::kTimeout), "Timeout");
}

}  // namespace
}  // namespace dglbf
