// Copyright 2026 The Flowfire Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "flowfire/analysis.h"

#include <gtest/gtest.h>

#include "flowfire/error.h"
#include "support/fixtures.h"
#include "support/oracles.h"

namespace flowfire {
namespace {

using testing::F;
using testing::V;

testing::oracle::Grid to_grid(const FaceRep& faces) {
  testing::oracle::Grid g;
  for (const auto& [cell, v] : faces) g[{cell.x(), cell.y()}] = v;
  return g;
}

Rules face_rules(bool hole) {
  return hole ? Rules::make(testing::grid_with_hole(), Representation::kFace, true)
              : Rules::make(testing::shared(Complex::grid()),
                            Representation::kFace, false);
}

TEST(AnalysisTest, PyramidValues) {
  const auto grid = Complex::grid(F(0, 0));
  const auto k4 = predict_pyramid(grid, F(0, 0), 4);
  EXPECT_EQ(k4.get(F(0, 0)), 4);
  EXPECT_EQ(k4.get(F(1, 0)), 4);
  EXPECT_EQ(k4.get(F(1, 1)), 3);
  EXPECT_EQ(k4.get(F(-2, 1)), 2);
  EXPECT_EQ(k4.get(F(0, -4)), 1);
  EXPECT_EQ(k4.get(F(3, 2)), 0);
  EXPECT_EQ(total_chips(k4), 84);
  for (int k = 1; k <= 8; ++k) {
    EXPECT_EQ(total_chips(predict_pyramid(grid, F(0, 0), k)),
              testing::oracle::pyramid_total(k));
  }
  const auto k1 = predict_pyramid(grid, F(0, 0), 1);
  EXPECT_EQ(k1.size(), 5u);
}

TEST(AnalysisTest, PlanarPyramid) {
  const auto ring = Complex::planar(testing::hex_ring_spec());
  const auto d = testing::hex_ring_distances();
  const auto p = predict_pyramid(ring, CellId::planar_face(0), 3);
  for (std::int64_t f = 0; f < 20; ++f) {
    const std::int64_t expected = f == 0 ? 3 : std::max<std::int64_t>(0, 3 - d[f] + 1);
    EXPECT_EQ(p.get(CellId::planar_face(f)), expected) << f;
  }
}

TEST(AnalysisTest, TwoChipsHaveFourTerminals) {
  const auto rules = face_rules(false);
  const FaceRep start{{F(0, 0), 2}};
  const auto set = enumerate_terminals(State{start}, rules);
  EXPECT_FALSE(set.truncated);
  EXPECT_EQ(set.terminals.size(), 4u);
  EXPECT_EQ(set.reachable_states, 5u);
  const auto oracle = testing::oracle::grid_face_bfs(to_grid(start), {});
  EXPECT_EQ(oracle.states, set.reachable_states);
  EXPECT_EQ(oracle.terminals.size(), set.terminals.size());
  for (const auto& t : set.terminals) {
    EXPECT_TRUE(oracle.terminals.count(to_grid(std::get<FaceRep>(t))));
  }
}

TEST(AnalysisTest, PulsesHaveOneTerminal) {
  const auto rules = face_rules(true);
  for (int k = 1; k <= 2; ++k) {
    const auto start = testing::pulse(F(0, 0), k);
    const auto set = enumerate_terminals(State{start}, rules);
    EXPECT_FALSE(set.truncated);
    ASSERT_EQ(set.terminals.size(), 1u);
    EXPECT_EQ(std::get<FaceRep>(set.terminals[0]),
              predict_pyramid(*rules.complex, F(0, 0), k));
    const auto oracle = testing::oracle::grid_face_bfs(
        to_grid(start), std::pair<std::int64_t, std::int64_t>{0, 0});
    EXPECT_EQ(oracle.states, set.reachable_states);
    EXPECT_EQ(oracle.transitions, set.transitions);
    EXPECT_EQ(oracle.terminals.size(), 1u);
  }
}

TEST(AnalysisTest, OrderAndParallelismDoNotMatter) {
  const auto rules = face_rules(false);
  const State start{FaceRep{{F(0, 0), 3}, {F(2, 0), 1}}};
  const auto dfs = enumerate_terminals(start, rules);
  const auto bfs = enumerate_terminals(start, rules, {}, SearchOrder::kBreadthFirst);
  const auto par = enumerate_terminals_parallel(start, rules, {}, 4);
  EXPECT_EQ(dfs.terminals, bfs.terminals);
  EXPECT_EQ(dfs.terminals, par.terminals);
  EXPECT_EQ(dfs.reachable_states, bfs.reachable_states);
  EXPECT_EQ(dfs.reachable_states, par.reachable_states);
  EXPECT_EQ(dfs.transitions, par.transitions);
}

TEST(AnalysisTest, CapsTruncate) {
  const auto rules = face_rules(true);
  SearchCaps caps;
  caps.max_states = 10;
  const auto set = enumerate_terminals(State{testing::pulse(F(0, 0), 2)}, rules, caps);
  EXPECT_TRUE(set.truncated);
}

TEST(AnalysisTest, RowOnThreeBands) {
  const auto bands = testing::shared(Complex::planar(testing::three_band_spec()));
  const auto rules = Rules::make(bands, Representation::kFace, false);
  const auto l = CellId::planar_face(0), m = CellId::planar_face(1),
             r = CellId::planar_face(2);
  const State row{FaceRep{{l, 2}, {r, 2}}};
  const auto set = enumerate_terminals(row, rules);
  ASSERT_EQ(set.terminals.size(), 2u);
  std::set<std::string> got;
  for (const auto& t : set.terminals) got.insert(state_encoding(t));
  EXPECT_TRUE(got.count(state_encoding(State{FaceRep{{l, 1}, {m, 1}, {r, 2}}})));
  EXPECT_TRUE(got.count(state_encoding(State{FaceRep{{l, 2}, {m, 1}, {r, 1}}})));
  const auto violations = check_diamond(row, rules);
  ASSERT_EQ(violations.size(), 1u);
  EXPECT_EQ(violations[0].first, Move::transfer(l, m));
  EXPECT_EQ(violations[0].second, Move::transfer(r, m));
}

TEST(AnalysisTest, DiamondFailsForTwoChips) {
  const auto v = check_diamond(State{FaceRep{{F(0, 0), 2}}}, face_rules(false));
  EXPECT_EQ(v.size(), 6u);
}

TEST(AnalysisTest, DiamondHoldsForCreatePairs) {
  const auto v = check_diamond(State{testing::pulse(F(0, 0), 1)}, face_rules(true));
  EXPECT_TRUE(v.empty());
}

TEST(AnalysisTest, NonterminationCriterion) {
  const auto grid = Complex::grid();
  const auto five = nontermination_criterion(grid, EdgeFlow{{V(0, 0), 5}});
  EXPECT_EQ(five.verdict, Verdict::kNonTerminating);
  EXPECT_EQ(std::abs(five.imbalance), 5);
  EXPECT_EQ(five.degree, 4);
  EXPECT_TRUE(five.witness.has_value());
  EXPECT_EQ(nontermination_criterion(grid, EdgeFlow{{V(0, 0), 2}}).verdict,
            Verdict::kUnknown);
  EXPECT_EQ(nontermination_criterion(
                grid, faces_to_edges(grid, FaceRep{{F(0, 0), 9}})).verdict,
            Verdict::kUnknown);
}

TEST(AnalysisTest, AuditCleanOnPulse) {
  const auto rules = face_rules(true);
  RunOptions options;
  options.monitors = parse_monitors("all");
  const auto report = run(State{testing::pulse(F(0, 0), 3)}, rules,
                          Strategy::seeded_random(4), options);
  const auto audit = audit_trajectory(report, rules);
  EXPECT_TRUE(audit.clean()) << audit.violation->invariant;
  EXPECT_FALSE(audit.checked.empty());
}

TEST(AnalysisTest, AuditCatchesCorruptedPsi) {
  const auto rules = face_rules(true);
  RunOptions options;
  options.monitors = parse_monitors("all");
  auto report = run(State{testing::pulse(F(0, 0), 3)}, rules,
                    Strategy::seeded_random(4), options);
  ASSERT_GT(report.steps, 5u);
  report.streams.psi[5] += 1;
  const auto audit = audit_trajectory(report, rules);
  ASSERT_FALSE(audit.clean());
  EXPECT_EQ(audit.violation->index, 5u);
}

TEST(AnalysisTest, AuditNoHolePhi) {
  const auto rules = face_rules(false);
  RunOptions options;
  options.monitors = kMonitorPhi | kMonitorChips | kMonitorExtrema;
  auto report = run(State{FaceRep{{F(0, 0), 5}, {F(1, 1), -3}}}, rules,
                    Strategy::seeded_random(2), options);
  EXPECT_TRUE(audit_trajectory(report, rules).clean());
  report.streams.phi.back() = report.streams.phi[report.streams.phi.size() - 2] - 1;
  EXPECT_FALSE(audit_trajectory(report, rules).clean());
}

TEST(AnalysisTest, AuditNeedsMonitors) {
  const auto rules = face_rules(true);
  const auto report = run(State{testing::pulse(F(0, 0), 2)}, rules,
                          Strategy::seeded_random(1), RunOptions{});
  try {
    audit_trajectory(report, rules);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingMonitor);
  }
}

TEST(AnalysisTest, EdgeRunAuditChecksImbalance) {
  const auto rules = Rules::make(testing::shared(Complex::grid()),
                                 Representation::kEdge, false);
  RunOptions options;
  options.monitors = kMonitorImbalance;
  options.step_cap = 200;
  const auto report = run(State{EdgeFlow{{V(0, 0), 3}}}, rules,
                          Strategy::seeded_random(3), options);
  EXPECT_TRUE(audit_trajectory(report, rules).clean());
}

}  // namespace
}  // namespace flowfire
