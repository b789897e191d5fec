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

#include "flowfire/cell.h"

#include <gtest/gtest.h>

#include <vector>

#include "flowfire/error.h"

namespace flowfire {
namespace {

TEST(CellTest, RoundTripsEveryKind) {
  const std::vector<std::int64_t> p3{1, -2, 3};
  const std::vector<CellId> cells{
      CellId::grid_vertex(-1, 4), CellId::horizontal(3, 7),
      CellId::vertical(0, -5),    CellId::grid_face(2, 3),
      CellId::planar_vertex(0),   CellId::planar_edge(12),
      CellId::planar_face(19),    CellId::facet(p3),
      CellId::ridge(2, p3),
  };
  for (const auto& cell : cells) {
    EXPECT_EQ(parse_cell(to_string(cell)), cell) << to_string(cell);
  }
  EXPECT_EQ(to_string(CellId::horizontal(3, 7)), "H(3,7)");
  EXPECT_EQ(to_string(CellId::facet(p3)), "C(1,-2,3)");
  EXPECT_EQ(to_string(CellId::ridge(2, p3)), "R2(1,-2,3)");
}

TEST(CellTest, RejectsMalformedIdentifiers) {
  for (const char* text : {"", "F", "F(1)", "F(1,2", "F(a,b)", "X(1,2)",
                           "f-1", "e", "R3(0,0,0)", "C(1)", "P(1,2,3)"}) {
    try {
      parse_cell(text);
      ADD_FAILURE() << "accepted " << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kParse) << text;
    }
  }
}

TEST(CellTest, TotalOrderIsStrict) {
  const auto a = CellId::grid_face(0, 0), b = CellId::grid_face(0, 1),
             c = CellId::grid_face(1, -5);
  EXPECT_LT(a, b);
  EXPECT_LT(b, c);
  EXPECT_LT(a, c);
  EXPECT_NE(CellIdHash{}(a), CellIdHash{}(b));
}

}  // namespace
}  // namespace flowfire
