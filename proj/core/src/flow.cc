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

#include "flowfire/flow.h"

#include <deque>
#include <functional>
#include <limits>
#include <set>
#include <unordered_map>

namespace flowfire {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) {
    throw Error(ErrorCode::kOverflow, "64-bit overflow in flow arithmetic");
  }
  return out;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw Error(ErrorCode::kOverflow, "64-bit overflow in flow arithmetic");
  }
  return out;
}

namespace {

void require_edges(const Complex& complex) {
  if (!complex.supports_edges()) {
    throw Error(ErrorCode::kUnsupported,
                "edge flows are not modelled on the n-dimensional grid; use "
                "the facet representation");
  }
}

void check_support(const Complex& complex, const EdgeFlow& flow) {
  for (const auto& [edge, value] : flow) {
    if (!complex.has_edge(edge)) {
      throw Error(ErrorCode::kUnknownEdge, "unknown edge " + to_string(edge),
                  to_string(edge));
    }
  }
}

std::int64_t induced_value(const Complex& complex, const FaceRep& faces,
                           const CellId& edge) {
  std::int64_t v = 0;
  for (const auto& [face, sign] : complex.incident_faces(edge)) {
    v = checked_add(v, checked_mul(sign, faces.get(face)));
  }
  return v;
}

}  // namespace

std::int64_t imbalance(const Complex& complex, const EdgeFlow& flow,
                       const CellId& vertex) {
  require_edges(complex);
  std::int64_t total = 0;
  for (const auto& edge : complex.edges_at(vertex)) {
    const auto value = flow.get(edge);
    if (value == 0) continue;
    const auto [tail, head] = complex.endpoints(edge);
    if (head == vertex) total = checked_add(total, value);
    if (tail == vertex) total = checked_add(total, -value);
  }
  return total;
}

std::vector<VertexImbalance> imbalances(const Complex& complex,
                                        const EdgeFlow& flow) {
  require_edges(complex);
  check_support(complex, flow);
  std::set<CellId> touched;
  for (const auto& [edge, value] : flow) {
    const auto [tail, head] = complex.endpoints(edge);
    touched.insert(tail);
    touched.insert(head);
  }
  std::vector<VertexImbalance> out;
  for (const auto& v : touched) {
    const auto b = imbalance(complex, flow, v);
    if (b != 0) out.push_back({v, b});
  }
  return out;
}

bool is_conservative(const Complex& complex, const EdgeFlow& flow) {
  return imbalances(complex, flow).empty();
}

EdgeFlow faces_to_edges(const Complex& complex, const FaceRep& faces) {
  require_edges(complex);
  EdgeFlow out;
  for (const auto& [face, value] : faces) {
    for (const auto& [edge, sign] : complex.boundary(face)) {
      out.add(edge, checked_mul(sign, value));
    }
  }
  return out;
}

FaceRep edges_to_faces(const Complex& complex, const EdgeFlow& flow) {
  require_edges(complex);
  check_support(complex, flow);
  if (auto bad = imbalances(complex, flow); !bad.empty()) {
    throw Error(ErrorCode::kNotConservative,
                "flow is not conservative: imbalance " +
                    std::to_string(bad.front().imbalance) + " at " +
                    to_string(bad.front().vertex),
                to_string(bad.front().vertex));
  }
  if (flow.empty()) return {};

  // The integration window and its roots (faces pinned to zero).
  std::vector<CellId> window;
  std::function<bool(const CellId&)> in_window;
  std::vector<CellId> roots;
  std::int64_t x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  if (complex.kind() == ComplexKind::kGrid) {
    x0 = y0 = std::numeric_limits<std::int64_t>::max();
    x1 = y1 = std::numeric_limits<std::int64_t>::min();
    for (const auto& [edge, value] : flow) {
      for (const auto& [face, sign] : complex.incident_faces(edge)) {
        x0 = std::min(x0, face.x());
        x1 = std::max(x1, face.x());
        y0 = std::min(y0, face.y());
        y1 = std::max(y1, face.y());
      }
    }
    --x0, --y0, ++x1, ++y1;
    in_window = [&](const CellId& f) {
      return f.x() >= x0 && f.x() <= x1 && f.y() >= y0 && f.y() <= y1;
    };
    for (auto x = x0; x <= x1; ++x) {
      for (auto y = y0; y <= y1; ++y) window.push_back(CellId::grid_face(x, y));
    }
    roots.push_back(CellId::grid_face(x0, y0));
  } else {
    window = complex.faces();
    in_window = [](const CellId&) { return true; };
    roots.push_back(complex.external_face().value_or(window.front()));
    for (const auto& f : window) roots.push_back(f);
  }

  // Integrate along a breadth-first dual spanning forest.
  std::unordered_map<CellId, std::int64_t, CellIdHash> value;
  for (const auto& root : roots) {
    if (value.count(root)) continue;
    value[root] = 0;
    std::deque<CellId> queue{root};
    while (!queue.empty()) {
      const CellId c = queue.front();
      queue.pop_front();
      for (const auto& d : complex.neighbors(c)) {
        if (!in_window(d) || value.count(d)) continue;
        const CellId e = complex.shared_edges(c, d).front();
        int sign_c = 0, sign_d = 0;
        for (const auto& [face, sign] : complex.incident_faces(e)) {
          (face == c ? sign_c : sign_d) = sign;
        }
        // f(e) = s_c F_c + s_d F_d with s_d = +-1.
        value[d] = checked_mul(
            sign_d, checked_add(flow.get(e), -checked_mul(sign_c, value[c])));
        queue.push_back(d);
      }
    }
  }

  FaceRep out;
  for (const auto& [face, v] : value) out.set(face, v);
  for (const auto& face : window) {
    for (const auto& [edge, sign] : complex.boundary(face)) {
      const auto pair = complex.incident_faces(edge);
      if (!in_window(pair[0].cell) || !in_window(pair[1].cell)) continue;
      if (induced_value(complex, out, edge) != flow.get(edge)) {
        throw Error(ErrorCode::kInconsistentIntegration,
                    "face integration disagrees with the flow on " +
                        to_string(edge),
                    to_string(edge));
      }
    }
  }
  return out;
}

std::int64_t phi(const FaceRep& faces) {
  std::int64_t total = 0;
  for (const auto& [face, value] : faces) {
    total = checked_add(total, checked_mul(value, value));
  }
  return total;
}

std::int64_t psi(const Complex& complex, const FaceRep& faces, std::int64_t k,
                 const CellId& sigma) {
  const std::int64_t radius = checked_add(k, 1);
  for (const auto& [face, value] : faces) {
    if (complex.dual_distance(sigma, face) > radius) {
      throw Error(ErrorCode::kSupportOutsideWindow,
                  to_string(face) + " lies outside the potential window",
                  to_string(face));
    }
  }
  std::int64_t total = 0;
  for (const auto& [face, dist] : complex.faces_within(sigma, radius)) {
    const auto deficit = checked_add(k, -faces.get(face));
    total = checked_add(total, checked_mul(deficit, deficit));
  }
  return total;
}

std::pair<std::int64_t, std::int64_t> face_extrema(const Complex& complex,
                                                   const FaceRep& faces) {
  std::int64_t hi = std::numeric_limits<std::int64_t>::min();
  std::int64_t lo = std::numeric_limits<std::int64_t>::max();
  if (complex.is_finite()) {
    for (const auto& face : complex.faces()) {
      hi = std::max(hi, faces.get(face));
      lo = std::min(lo, faces.get(face));
    }
  } else {
    hi = lo = 0;
    for (const auto& [face, value] : faces) {
      hi = std::max(hi, value);
      lo = std::min(lo, value);
    }
  }
  return {hi, lo};
}

std::int64_t total_chips(const FaceRep& faces) {
  std::int64_t total = 0;
  for (const auto& [face, value] : faces) total = checked_add(total, value);
  return total;
}

}  // namespace flowfire
