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

#include "support/fixtures.h"

#include <set>
#include <utility>

namespace flowfire::testing {

std::shared_ptr<const Complex> shared(Complex complex) {
  return std::make_shared<const Complex>(std::move(complex));
}

std::shared_ptr<const Complex> grid_with_hole() {
  return shared(Complex::grid(F(0, 0)));
}

FaceRep pulse(const CellId& sigma, std::int64_t k) {
  FaceRep out;
  out.set(sigma, k);
  return out;
}

PlanarSpec hex_ring_spec() {
  // Vertices: inner hexagon a_i = i, middle b_i = 6 + i, outer c_i = 12 + i,
  // numbered counter-clockwise. Every face is walked counter-clockwise.
  auto a = [](int i) { return static_cast<std::int64_t>(i % 6); };
  auto b = [](int i) { return static_cast<std::int64_t>(6 + i % 6); };
  auto c = [](int i) { return static_cast<std::int64_t>(12 + i % 6); };
  std::vector<std::vector<std::int64_t>> cycles;
  cycles.push_back({a(0), a(1), a(2), a(3), a(4), a(5)});
  for (int i = 0; i < 6; ++i) cycles.push_back({a(i + 1), a(i), b(i), b(i + 1)});
  for (int i = 0; i < 6; ++i) cycles.push_back({b(i + 1), b(i), c(i)});
  for (int i = 0; i < 6; ++i) cycles.push_back({b(i + 1), c(i), c(i + 1)});
  cycles.push_back({c(5), c(4), c(3), c(2), c(1), c(0)});
  return planar_from_cycles(cycles, 19, 0);
}

std::vector<std::int64_t> hex_ring_distances() {
  std::vector<std::int64_t> d(20);
  d[0] = 0;
  for (int i = 1; i <= 6; ++i) d[i] = 1;
  for (int i = 7; i <= 12; ++i) d[i] = 2;
  for (int i = 13; i <= 18; ++i) d[i] = 3;
  d[19] = 4;
  return d;
}

PlanarSpec three_band_spec() {
  // Two vertices (the shared points of both circles) and two edges per circle.
  PlanarSpec spec;
  spec.edges = {{0, 1}, {1, 0}, {0, 1}, {1, 0}};
  spec.faces = {
      {{0, 1}, {1, 1}},
      {{2, 1}, {0, -1}, {1, -1}, {3, 1}},
      {{3, -1}, {2, -1}},
  };
  spec.external = 2;
  return spec;
}

FaceRep random_faces(std::mt19937_64& rng, int width, int height, int support,
                     int lo, int hi) {
  std::uniform_int_distribution<int> xs(0, width - 1), ys(0, height - 1);
  std::uniform_int_distribution<int> vs(lo, hi);
  FaceRep out;
  std::set<std::pair<int, int>> used;
  while (static_cast<int>(used.size()) < support) {
    const int x = xs(rng), y = ys(rng);
    if (!used.insert({x, y}).second) continue;
    int v = 0;
    while (v == 0) v = vs(rng);
    out.set(F(x, y), v);
  }
  return out;
}

}  // namespace flowfire::testing
