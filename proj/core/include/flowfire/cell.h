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

#ifndef FLOWFIRE_CELL_H_
#define FLOWFIRE_CELL_H_

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace flowfire {

inline constexpr int kMaxDimension = 6;

enum class CellKind : std::uint8_t {
  kGridVertex,
  kGridEdge,
  kGridFace,
  kPlanarVertex,
  kPlanarEdge,
  kPlanarFace,
  kNdRidge,
  kNdFacet,
};

enum class Axis : std::uint8_t { kHorizontal = 0, kVertical = 1 };

// Identifier of a vertex, edge, face, ridge or facet of any supported complex.
//
// Textual syntax (used by every file format):
//   grid      P(x,y)  H(x,y)  V(x,y)  F(x,y)
//   planar    v3      e5      f2
//   n-grid    R<axis>(c1,...,cn)      C(c1,...,cn)
//
// H(x,y) runs from vertex (x,y) to (x+1,y); V(x,y) from (x,y) to (x,y+1).
// F(x,y) is the unit square with lower-left corner (x,y). The facet C(p) is
// the unit cube [p, p+1]; the ridge R_i(q) is the wall between C(q - e_i) and
// C(q). Ordering is lexicographic over (kind, axis, rank, coordinates).
struct CellId {
  CellKind kind = CellKind::kGridFace;
  std::uint8_t axis = 0;
  std::uint8_t rank = 0;
  std::array<std::int64_t, kMaxDimension> coords{};

  static CellId grid_vertex(std::int64_t x, std::int64_t y);
  static CellId grid_edge(Axis axis, std::int64_t x, std::int64_t y);
  static CellId horizontal(std::int64_t x, std::int64_t y) {
    return grid_edge(Axis::kHorizontal, x, y);
  }
  static CellId vertical(std::int64_t x, std::int64_t y) {
    return grid_edge(Axis::kVertical, x, y);
  }
  static CellId grid_face(std::int64_t x, std::int64_t y);
  static CellId planar_vertex(std::int64_t index);
  static CellId planar_edge(std::int64_t index);
  static CellId planar_face(std::int64_t index);
  static CellId facet(std::span<const std::int64_t> position);
  static CellId ridge(int axis, std::span<const std::int64_t> position);

  std::int64_t x() const { return coords[0]; }
  std::int64_t y() const { return coords[1]; }
  std::int64_t index() const { return coords[0]; }
  std::span<const std::int64_t> position() const {
    return {coords.data(), rank};
  }

  bool is_vertex() const {
    return kind == CellKind::kGridVertex || kind == CellKind::kPlanarVertex;
  }
  bool is_edge() const {
    return kind == CellKind::kGridEdge || kind == CellKind::kPlanarEdge ||
           kind == CellKind::kNdRidge;
  }
  bool is_face() const {
    return kind == CellKind::kGridFace || kind == CellKind::kPlanarFace ||
           kind == CellKind::kNdFacet;
  }

  auto operator<=>(const CellId&) const = default;
  bool operator==(const CellId&) const = default;
};

std::string to_string(const CellId& cell);

// Throws Error(kParse) on malformed input.
CellId parse_cell(std::string_view text);

struct CellIdHash {
  std::size_t operator()(const CellId& cell) const noexcept;
};

}  // namespace flowfire

#endif  // FLOWFIRE_CELL_H_
