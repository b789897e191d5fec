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

#ifndef FLOWFIRE_COMPLEX_H_
#define FLOWFIRE_COMPLEX_H_

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flowfire/cell.h"

namespace flowfire {

// A cell paired with an incidence coefficient in {+1, -1}.
struct SignedCell {
  CellId cell;
  int sign = 1;

  bool operator==(const SignedCell&) const = default;
};

enum class ComplexKind { kGrid, kPlanar, kNdGrid };

// Raw input of a finite planar complex. Faces are closed walks given as
// (edge index, sign) where sign is +1 when the walk traverses the edge from
// tail to head. Every edge must appear in exactly two distinct faces with
// opposite signs; the external face is one of the listed faces.
struct PlanarSpec {
  std::vector<std::pair<std::int64_t, std::int64_t>> edges;
  std::vector<std::vector<std::pair<std::int64_t, int>>> faces;
  std::optional<std::int64_t> external;
  std::optional<std::int64_t> distinguished;
};

// Builds a PlanarSpec from faces given as vertex cycles. An edge is created
// the first time a consecutive pair is seen, oriented along that traversal.
PlanarSpec planar_from_cycles(
    const std::vector<std::vector<std::int64_t>>& cycles,
    std::optional<std::int64_t> external,
    std::optional<std::int64_t> distinguished);

struct Violation {
  std::string message;
};

// Invariant check on raw input; an empty result means the spec is valid.
std::vector<Violation> validate(const PlanarSpec& spec);

// Immutable cell complex: the infinite square grid, a finite planar complex,
// or the infinite n-dimensional cube grid. Cheap to copy (planar data is
// shared) and safe for concurrent readers.
class Complex {
 public:
  static Complex grid(std::optional<CellId> distinguished = std::nullopt);
  static Complex nd_grid(int dimension,
                         std::optional<CellId> distinguished = std::nullopt);
  // Throws Error(kInvalidComplex) listing every violation.
  static Complex planar(const PlanarSpec& spec);

  ComplexKind kind() const { return kind_; }
  int dimension() const { return dimension_; }
  bool is_finite() const { return kind_ == ComplexKind::kPlanar; }
  const std::optional<CellId>& distinguished() const { return distinguished_; }
  std::optional<CellId> external_face() const;
  // The same complex with a different distinguished face.
  Complex with_distinguished(std::optional<CellId> sigma) const;

  bool has_face(const CellId& cell) const;
  bool has_edge(const CellId& cell) const;
  bool has_vertex(const CellId& cell) const;
  // Whether edge-level (flow) operations exist on this complex.
  bool supports_edges() const { return kind_ != ComplexKind::kNdGrid; }

  // The two faces containing `edge`, sorted by cell order, with the
  // coefficient of `edge` in each face's oriented boundary.
  std::array<SignedCell, 2> incident_faces(const CellId& edge) const;
  // Oriented boundary of `face` as a closed walk. On the grid a positive
  // face value circulates clockwise: +1 on H(x,y+1) and V(x,y), -1 on H(x,y)
  // and V(x+1,y).
  std::vector<SignedCell> boundary(const CellId& face) const;
  // Faces sharing at least one edge with `face`, sorted, without repeats.
  std::vector<CellId> neighbors(const CellId& face) const;
  // Edges contained in both faces, sorted.
  std::vector<CellId> shared_edges(const CellId& a, const CellId& b) const;
  bool edge_on_face(const CellId& edge, const CellId& face) const;

  // (tail, head) of an edge under the fixed orientation.
  std::pair<CellId, CellId> endpoints(const CellId& edge) const;
  // Edges touching `vertex`, sorted.
  std::vector<CellId> edges_at(const CellId& vertex) const;
  int degree(const CellId& vertex) const;

  // Shortest-path length in the dual graph; Manhattan/L1 on the grids.
  std::int64_t dual_distance(const CellId& from, const CellId& to) const;
  // Every face within dual distance `radius` of `center`, with its distance,
  // sorted by cell order.
  std::vector<std::pair<CellId, std::int64_t>> faces_within(
      const CellId& center, std::int64_t radius) const;

  // Finite complexes only.
  std::vector<CellId> faces() const;
  std::vector<CellId> edges() const;
  std::vector<CellId> vertices() const;

  // The raw input of a planar complex; null for the grids.
  const PlanarSpec* planar_spec() const;

  // Re-checks the structural invariants; empty means valid.
  std::vector<Violation> validate() const;

 private:
  struct PlanarData;

  Complex() = default;
  void check_face(const CellId& face) const;
  void check_edge(const CellId& edge) const;
  void check_vertex(const CellId& vertex) const;
  std::vector<std::int64_t> planar_distances_from(std::int64_t face) const;

  ComplexKind kind_ = ComplexKind::kGrid;
  int dimension_ = 2;
  std::optional<CellId> distinguished_;
  std::shared_ptr<const PlanarData> planar_;
};

}  // namespace flowfire

#endif  // FLOWFIRE_COMPLEX_H_
