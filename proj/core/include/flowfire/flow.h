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

#ifndef FLOWFIRE_FLOW_H_
#define FLOWFIRE_FLOW_H_

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flowfire/cell.h"
#include "flowfire/complex.h"
#include "flowfire/error.h"

namespace flowfire {

std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);

// Sparse, finite-support integer assignment to cells. Entries are kept sorted
// by cell order and zeros are dropped eagerly, so equality is structural and
// the canonical encoding is unique.
template <class Tag>
class Field {
 public:
  using Entry = std::pair<CellId, std::int64_t>;

  Field() = default;
  Field(std::initializer_list<Entry> entries) {
    for (const auto& [cell, value] : entries) add(cell, value);
  }

  std::int64_t get(const CellId& cell) const {
    auto it = find(cell);
    return (it != entries_.end() && it->first == cell) ? it->second : 0;
  }

  void set(const CellId& cell, std::int64_t value) {
    auto it = find(cell);
    const bool present = it != entries_.end() && it->first == cell;
    if (value == 0) {
      if (present) entries_.erase(it);
    } else if (present) {
      it->second = value;
    } else {
      entries_.insert(it, Entry{cell, value});
    }
  }

  void add(const CellId& cell, std::int64_t delta) {
    if (delta != 0) set(cell, checked_add(get(cell), delta));
  }

  Field& operator+=(const Field& other) {
    for (const auto& [cell, value] : other.entries_) add(cell, value);
    return *this;
  }
  friend Field operator+(Field lhs, const Field& rhs) { return lhs += rhs; }

  const std::vector<Entry>& entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // Byte string identifying the configuration; equal iff the fields are.
  std::string canonical_encoding() const {
    std::string out;
    out.reserve(entries_.size() * 24);
    auto put = [&out](std::uint64_t v, int bytes) {
      for (int i = 0; i < bytes; ++i) {
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
      }
    };
    for (const auto& [cell, value] : entries_) {
      put(static_cast<std::uint64_t>(cell.kind), 1);
      put(cell.axis, 1);
      put(cell.rank, 1);
      for (int i = 0; i < cell.rank; ++i) {
        put(static_cast<std::uint64_t>(cell.coords[i]), 8);
      }
      put(static_cast<std::uint64_t>(value), 8);
    }
    return out;
  }

  bool operator==(const Field&) const = default;

 private:
  auto find(const CellId& cell) const {
    return std::lower_bound(
        entries_.begin(), entries_.end(), cell,
        [](const Entry& e, const CellId& c) { return e.first < c; });
  }
  auto find(const CellId& cell) {
    return std::lower_bound(
        entries_.begin(), entries_.end(), cell,
        [](const Entry& e, const CellId& c) { return e.first < c; });
  }

  std::vector<Entry> entries_;
};

struct EdgeTag {};
struct FaceTag {};

// Signed units of flow per edge, relative to the edge's fixed orientation.
using EdgeFlow = Field<EdgeTag>;
// Circulation per face (or facet); positive is clockwise.
using FaceRep = Field<FaceTag>;

struct VertexImbalance {
  CellId vertex;
  std::int64_t imbalance = 0;

  bool operator==(const VertexImbalance&) const = default;
};

// inflow(v) - outflow(v) under the fixed edge orientations.
std::int64_t imbalance(const Complex& complex, const EdgeFlow& flow,
                       const CellId& vertex);
// Nonzero imbalances over every vertex touching the support, sorted.
std::vector<VertexImbalance> imbalances(const Complex& complex,
                                        const EdgeFlow& flow);
bool is_conservative(const Complex& complex, const EdgeFlow& flow);

// f(e) = sum over the faces containing e of sign(e, face) * F(face).
EdgeFlow faces_to_edges(const Complex& complex, const FaceRep& faces);

// The finite-support face representation of a conservative flow, with the
// far face (grid) or the external face (planar) pinned to zero. Throws
// NotConservative with a witness vertex otherwise.
FaceRep edges_to_faces(const Complex& complex, const EdgeFlow& flow);

// Sum of squared face values.
std::int64_t phi(const FaceRep& faces);

// Sum of (k - K_t)^2 over every face within dual distance k + 1 of sigma.
// Throws SupportOutsideWindow if the support leaves that window.
std::int64_t psi(const Complex& complex, const FaceRep& faces, std::int64_t k,
                 const CellId& sigma);

// Largest and smallest value over all faces; on infinite complexes the
// implicit zeros outside the support count.
std::pair<std::int64_t, std::int64_t> face_extrema(const Complex& complex,
                                                   const FaceRep& faces);
std::int64_t total_chips(const FaceRep& faces);

}  // namespace flowfire

#endif  // FLOWFIRE_FLOW_H_
