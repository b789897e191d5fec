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

#ifndef FLOWFIRE_TESTS_SUPPORT_FIXTURES_H_
#define FLOWFIRE_TESTS_SUPPORT_FIXTURES_H_

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "flowfire/analysis.h"
#include "flowfire/complex.h"
#include "flowfire/engine.h"
#include "flowfire/flow.h"

namespace flowfire::testing {

inline CellId F(std::int64_t x, std::int64_t y) {
  return CellId::grid_face(x, y);
}
inline CellId H(std::int64_t x, std::int64_t y) {
  return CellId::horizontal(x, y);
}
inline CellId V(std::int64_t x, std::int64_t y) {
  return CellId::vertical(x, y);
}
inline CellId P(std::int64_t x, std::int64_t y) {
  return CellId::grid_vertex(x, y);
}

std::shared_ptr<const Complex> shared(Complex complex);

// Grid with hole F(0,0).
std::shared_ptr<const Complex> grid_with_hole();

// k on the hole, nothing elsewhere.
FaceRep pulse(const CellId& sigma, std::int64_t k);

// Hexagonal hole f0 surrounded by six quadrilaterals (f1..f6, distance 1,
// each adjacent to the next), twelve triangles (f7..f12 at distance 2,
// f13..f18 at distance 3) and the external face f19 at distance 4.
PlanarSpec hex_ring_spec();
// Distances from the hole, by face index, as built above.
std::vector<std::int64_t> hex_ring_distances();

// A sphere cut into two caps and a belt: f0 (cap) - f1 (belt) - f2 (cap,
// external). Adjacent bands share two edges; the caps do not touch.
PlanarSpec three_band_spec();

// Random finite face representation with `support` cells inside
// [0,width) x [0,height), values in [lo,hi] \ {0}.
FaceRep random_faces(std::mt19937_64& rng, int width, int height,
                     int support, int lo, int hi);

}  // namespace flowfire::testing

#endif  // FLOWFIRE_TESTS_SUPPORT_FIXTURES_H_
