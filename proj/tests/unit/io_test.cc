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

#include "flowfire/io.h"

#include <gtest/gtest.h>

#include "flowfire/error.h"
#include "support/fixtures.h"

namespace flowfire {
namespace {

using testing::F;
using testing::V;

TEST(IoTest, ComplexRoundTrip) {
  const auto grid = io::complex_from_json(
      io::json::parse(R"j({"kind":"grid","distinguished":"F(0,0)"})j"));
  EXPECT_EQ(grid.kind(), ComplexKind::kGrid);
  EXPECT_EQ(grid.distinguished(), F(0, 0));
  const auto ring = Complex::planar(testing::hex_ring_spec());
  const auto back = io::complex_from_json(io::complex_to_json(ring));
  EXPECT_EQ(back.faces(), ring.faces());
  EXPECT_EQ(back.distinguished(), ring.distinguished());
  EXPECT_EQ(io::complex_to_json(back), io::complex_to_json(ring));
  const auto cube = io::complex_from_json(
      io::json::parse(R"j({"kind":"ndgrid","n":3,"distinguished":"C(0,0,0)"})j"));
  EXPECT_EQ(cube.dimension(), 3);
}

TEST(IoTest, StateRoundTrip) {
  const State s{FaceRep{{F(0, 0), 3}, {F(-1, 2), -1}}};
  EXPECT_EQ(io::state_from_json(io::state_to_json(s)), s);
  const auto j = io::json::parse(
      R"j({"representation":"edge","entries":[["V(0,0)",5]]})j");
  EXPECT_EQ(io::state_from_json(j), (State{EdgeFlow{{V(0, 0), 5}}}));
}

TEST(IoTest, StateRejectsBadEntries) {
  for (const char* text :
       {R"j({"representation":"face","entries":[["F(0,0)",0]]})j",
        R"j({"representation":"face","entries":[["F(0,0)",1],["F(0,0)",2]]})j",
        R"j({"representation":"face","entries":[["V(0,0)",1]]})j",
        R"j({"representation":"sideways","entries":[]})j",
        R"j({"entries":[]})j"}) {
    EXPECT_THROW(io::state_from_json(io::json::parse(text)), Error) << text;
  }
}

TEST(IoTest, ReportRoundTrip) {
  const auto rules = Rules::make(testing::grid_with_hole(), Representation::kFace, true);
  RunOptions options;
  options.monitors = parse_monitors("all");
  const auto report = run(State{testing::pulse(F(0, 0), 2)}, rules,
                          Strategy::seeded_random(9), options);
  const auto j = io::report_to_json(report);
  EXPECT_EQ(io::report_from_json(j), report);
  EXPECT_EQ(j.at("stopReason"), "terminal");
  EXPECT_EQ(io::report_to_json(io::report_from_json(j)).dump(), j.dump());
}

TEST(IoTest, MoveRoundTrip) {
  for (const auto& m :
       {Move::edge_fire(V(0, 0)), Move::edge_fire_one_sided(V(1, 0), F(1, 0)),
        Move::transfer(F(0, 0), F(0, 1)), Move::create(F(1, 0)),
        Move::remove(F(0, -1))}) {
    EXPECT_EQ(io::move_from_json(io::move_to_json(m)), m);
  }
}

TEST(IoTest, ReadFileFailures) {
  try {
    io::read_json_file("/nonexistent/file.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
  }
}

}  // namespace
}  // namespace flowfire
