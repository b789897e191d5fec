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

#include "flowfire/engine.h"

#include <gtest/gtest.h>

#include <random>

#include "flowfire/analysis.h"
#include "flowfire/error.h"
#include "support/fixtures.h"

namespace flowfire {
namespace {

using testing::F;
using testing::H;
using testing::V;

Rules plain(Representation rep) {
  return Rules::make(testing::shared(Complex::grid()), rep, false);
}

Rules holed(Representation rep) {
  return Rules::make(testing::grid_with_hole(), rep, true);
}

TEST(EngineTest, ZeroIsTerminal) {
  EXPECT_TRUE(legal_moves(State{FaceRep{}}, plain(Representation::kFace)).empty());
  EXPECT_TRUE(legal_moves(State{EdgeFlow{}}, plain(Representation::kEdge)).empty());
}

TEST(EngineTest, TwoChipsTransferToEachNeighbour) {
  const auto moves = legal_moves(State{FaceRep{{F(0, 0), 2}}},
                                 plain(Representation::kFace));
  ASSERT_EQ(moves.size(), 4u);
  for (const auto& m : moves) {
    EXPECT_EQ(m.kind, MoveKind::kTransfer);
    EXPECT_EQ(m.cell, F(0, 0));
  }
  EXPECT_TRUE(std::is_sorted(moves.begin(), moves.end()));
  const auto next = apply_move(State{FaceRep{{F(0, 0), 2}}},
                               Move::transfer(F(0, 0), F(1, 0)),
                               plain(Representation::kFace));
  EXPECT_EQ(std::get<FaceRep>(next), (FaceRep{{F(0, 0), 1}, {F(1, 0), 1}}));
}

TEST(EngineTest, UnitPulseCreatesAtEveryNeighbour) {
  const auto moves = legal_moves(State{testing::pulse(F(0, 0), 1)},
                                 holed(Representation::kFace));
  ASSERT_EQ(moves.size(), 4u);
  for (const auto& m : moves) EXPECT_EQ(m.kind, MoveKind::kCreate);
}

TEST(EngineTest, OneUnitOnHoleBoundaryFiresOneSided) {
  const auto rules = holed(Representation::kEdge);
  const auto moves = legal_moves(State{EdgeFlow{{V(1, 0), 1}}}, rules);
  ASSERT_EQ(moves.size(), 1u);
  EXPECT_EQ(moves[0].kind, MoveKind::kEdgeFireOneSided);
  EXPECT_EQ(moves[0].other, F(1, 0));
  // Off the hole boundary one unit is not enough.
  EXPECT_TRUE(legal_moves(State{EdgeFlow{{V(3, 0), 1}}}, rules).empty());
}

TEST(EngineTest, EdgeFireReroutesAroundBothFaces) {
  const auto rules = plain(Representation::kEdge);
  const State start{EdgeFlow{{V(0, 0), 2}}};
  const auto next = std::get<EdgeFlow>(apply_move(start, Move::edge_fire(V(0, 0)), rules));
  EXPECT_EQ(next.get(V(0, 0)), 0);
  EXPECT_EQ(next.size(), 6u);
  for (const auto& [e, v] : next) EXPECT_EQ(std::abs(v), 1);
  // The two circulations have opposite handedness: the induced face values
  // of the rerouted part differ in sign.
  const auto& grid = *rules.complex;
  EXPECT_EQ(imbalances(grid, next), imbalances(grid, std::get<EdgeFlow>(start)));
}

TEST(EngineTest, StrictInequalityAtTheHole) {
  const auto rules = holed(Representation::kFace);
  const State s{FaceRep{{F(0, 0), 3}, {F(1, 0), 3}}};
  for (const auto& m : {Move::create(F(1, 0)), Move::remove(F(1, 0))}) {
    EXPECT_FALSE(illegal_reason(s, m, rules).empty());
    try {
      apply_move(s, m, rules);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kIllegalMove);
    }
  }
}

TEST(EngineTest, RepresentationMismatch) {
  try {
    legal_moves(State{FaceRep{}}, plain(Representation::kEdge));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRepresentationMismatch);
  }
}

TEST(EngineTest, NoHoleTransferDropsPhiByExactAmount) {
  const auto rules = plain(Representation::kFace);
  std::mt19937_64 rng(99);
  int checked = 0;
  while (checked < 1000) {
    const State s{testing::random_faces(rng, 5, 5, 6, -5, 5)};
    const auto moves = legal_moves(s, rules);
    if (moves.empty()) continue;
    const auto& m = moves[rng() % moves.size()];
    const auto& before = std::get<FaceRep>(s);
    const auto gap = before.get(m.cell) - before.get(m.other);
    const auto after = std::get<FaceRep>(apply_move(s, m, rules));
    ASSERT_EQ(phi(before) - phi(after), 2 * (gap - 1));
    ASSERT_GE(phi(before) - phi(after), 2);
    ++checked;
  }
}

TEST(EngineTest, TwoChipsTerminateInOneStep) {
  const auto rules = plain(Representation::kFace);
  for (auto kind : {StrategyKind::kSeededRandom, StrategyKind::kLexicographicFirst,
                    StrategyKind::kMaxDifference, StrategyKind::kFifoQueue}) {
    const auto report = run(State{FaceRep{{F(0, 0), 2}}}, rules,
                            Strategy::make(kind, 3), RunOptions{});
    EXPECT_TRUE(report.terminal);
    EXPECT_EQ(report.steps, 1u);
  }
}

TEST(EngineTest, PulseTwoIsConfluent) {
  const auto rules = holed(Representation::kFace);
  const auto expected = predict_pyramid(*rules.complex, F(0, 0), 2);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto report = run(State{testing::pulse(F(0, 0), 2)}, rules,
                            Strategy::seeded_random(seed), RunOptions{});
    ASSERT_TRUE(report.terminal);
    ASSERT_EQ(std::get<FaceRep>(report.final_state), expected) << seed;
  }
}

TEST(EngineTest, FiveUnitsHitTheStepCap) {
  const auto rules = plain(Representation::kEdge);
  RunOptions options;
  options.step_cap = 10'000;
  options.detect_revisits = false;
  const auto report = run(State{EdgeFlow{{V(0, 0), 5}}}, rules,
                          Strategy::seeded_random(1), options);
  EXPECT_EQ(report.stop, StopReason::kStepCap);
  EXPECT_FALSE(report.terminal);
  EXPECT_EQ(report.steps, 10'000u);
}

TEST(EngineTest, RunIsDeterministic) {
  const auto rules = holed(Representation::kFace);
  RunOptions options;
  options.monitors = parse_monitors("all");
  const auto a = run(State{testing::pulse(F(0, 0), 3)}, rules,
                     Strategy::seeded_random(17), options);
  const auto b = run(State{testing::pulse(F(0, 0), 3)}, rules,
                     Strategy::seeded_random(17), options);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.streams.psi.size(), a.steps + 1);
  EXPECT_EQ(a.streams.lemma_excess.size(), a.steps + 1);
}

TEST(EngineTest, MonitorsSampleBeforeAndAfter) {
  const auto rules = plain(Representation::kFace);
  RunOptions options;
  options.monitors = kMonitorPhi | kMonitorChips;
  const auto r = run(State{FaceRep{{F(0, 0), 2}}}, rules,
                     Strategy::lexicographic_first(), options);
  EXPECT_EQ(r.streams.phi, (std::vector<std::int64_t>{4, 2}));
  EXPECT_EQ(r.streams.chips, (std::vector<std::int64_t>{2, 2}));
  EXPECT_TRUE(r.streams.psi.empty());
}

TEST(EngineTest, PsiNeedsHoleRules) {
  RunOptions options;
  options.monitors = kMonitorPsi;
  try {
    run(State{FaceRep{{F(0, 0), 2}}}, plain(Representation::kFace),
        Strategy::lexicographic_first(), options);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(EngineTest, MatchedMovesSimulateEachOther) {
  for (bool hole : {false, true}) {
    const auto face_rules = hole ? holed(Representation::kFace)
                                 : plain(Representation::kFace);
    const auto edge_rules = hole ? holed(Representation::kEdge)
                                 : plain(Representation::kEdge);
    const auto& grid = *face_rules.complex;
    std::mt19937_64 rng(hole ? 8 : 9);
    FaceRep faces = hole ? testing::pulse(F(0, 0), 4)
                         : testing::random_faces(rng, 5, 5, 8, -4, 4);
    EdgeFlow edges = faces_to_edges(grid, faces);
    int steps = 0;
    while (steps < 200) {
      const auto moves = legal_moves(State{faces}, face_rules);
      if (moves.empty()) break;
      const auto m = moves[rng() % moves.size()];
      const auto em = edge_move_for(m, edge_rules);
      ASSERT_TRUE(illegal_reason(State{edges}, em, edge_rules).empty())
          << to_string(m) << " / " << to_string(em);
      ASSERT_EQ(face_move_for(em, edges, edge_rules), m);
      faces = std::get<FaceRep>(apply_move(State{faces}, m, face_rules));
      edges = std::get<EdgeFlow>(apply_move(State{edges}, em, edge_rules));
      ASSERT_TRUE(to_face_rules_equivalence(grid, edges, faces));
      ++steps;
    }
    EXPECT_GT(steps, 0);
  }
}

TEST(EngineTest, EquivalenceDetectsMismatch) {
  const auto grid = Complex::grid();
  EXPECT_TRUE(to_face_rules_equivalence(grid, EdgeFlow{}, FaceRep{}));
  EXPECT_FALSE(to_face_rules_equivalence(
      grid, faces_to_edges(grid, FaceRep{{F(0, 0), 1}}), FaceRep{{F(0, 0), 2}}));
}

TEST(EngineTest, SplitMixReferenceValues) {
  SplitMix64 rng(0);
  EXPECT_EQ(rng.next(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(rng.next(), 0x6e789e6aa1b965f4ULL);
}

TEST(EngineTest, StrategyNames) {
  EXPECT_EQ(parse_strategy("random"), StrategyKind::kSeededRandom);
  EXPECT_EQ(parse_strategy("lex"), StrategyKind::kLexicographicFirst);
  EXPECT_EQ(parse_strategy("max-diff"), StrategyKind::kMaxDifference);
  EXPECT_EQ(parse_strategy("fifo"), StrategyKind::kFifoQueue);
  EXPECT_THROW(parse_strategy("bogus"), Error);
}

}  // namespace
}  // namespace flowfire
