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

#include "flowfire/complex.h"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <map>

#include "flowfire/error.h"

namespace flowfire {

struct Complex::PlanarData {
  PlanarSpec spec;
  std::int64_t vertex_count = 0;
  std::vector<std::array<SignedCell, 2>> edge_faces;
  std::vector<std::vector<SignedCell>> boundaries;
  std::vector<std::vector<CellId>> neighbors;
  std::vector<std::vector<CellId>> vertex_edges;
};

namespace {

std::string edge_name(std::int64_t e) { return "e" + std::to_string(e); }
std::string face_name(std::int64_t f) { return "f" + std::to_string(f); }

void collect_nd_ball(int axis, int dimension, std::int64_t budget,
                     std::array<std::int64_t, kMaxDimension>& offset,
                     const CellId& center,
                     std::vector<std::pair<CellId, std::int64_t>>& out,
                     std::int64_t used) {
  if (axis == dimension) {
    CellId cell = center;
    for (int i = 0; i < dimension; ++i) cell.coords[i] += offset[i];
    out.emplace_back(cell, used);
    return;
  }
  for (std::int64_t d = -budget; d <= budget; ++d) {
    offset[axis] = d;
    collect_nd_ball(axis + 1, dimension, budget - std::llabs(d), offset,
                    center, out, used + std::llabs(d));
  }
  offset[axis] = 0;
}

}  // namespace

PlanarSpec planar_from_cycles(
    const std::vector<std::vector<std::int64_t>>& cycles,
    std::optional<std::int64_t> external,
    std::optional<std::int64_t> distinguished) {
  PlanarSpec spec;
  spec.external = external;
  spec.distinguished = distinguished;
  // Per edge: face that first traversed it, and whether it is still open.
  std::vector<std::int64_t> first_face;
  std::vector<bool> open;
  for (std::size_t f = 0; f < cycles.size(); ++f) {
    const auto& cycle = cycles[f];
    std::vector<std::pair<std::int64_t, int>> walk;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      std::int64_t from = cycle[i];
      std::int64_t to = cycle[(i + 1) % cycle.size()];
      std::optional<std::int64_t> reuse;
      for (std::size_t e = 0; e < spec.edges.size(); ++e) {
        if (open[e] && first_face[e] != static_cast<std::int64_t>(f) &&
            spec.edges[e].first == to && spec.edges[e].second == from) {
          reuse = static_cast<std::int64_t>(e);
          break;
        }
      }
      if (reuse) {
        open[*reuse] = false;
        walk.emplace_back(*reuse, -1);
      } else {
        spec.edges.emplace_back(from, to);
        first_face.push_back(static_cast<std::int64_t>(f));
        open.push_back(true);
        walk.emplace_back(static_cast<std::int64_t>(spec.edges.size()) - 1,
                          1);
      }
    }
    spec.faces.push_back(std::move(walk));
  }
  return spec;
}

std::vector<Violation> validate(const PlanarSpec& spec) {
  std::vector<Violation> out;
  auto report = [&out](std::string message) {
    out.push_back(Violation{std::move(message)});
  };
  const auto edge_count = static_cast<std::int64_t>(spec.edges.size());
  const auto face_count = static_cast<std::int64_t>(spec.faces.size());
  if (face_count == 0) report("complex has no faces");
  for (std::int64_t e = 0; e < edge_count; ++e) {
    if (spec.edges[e].first < 0 || spec.edges[e].second < 0) {
      report(edge_name(e) + " has a negative vertex index");
    }
  }
  std::vector<std::vector<std::pair<std::int64_t, int>>> uses(edge_count);
  for (std::int64_t f = 0; f < face_count; ++f) {
    const auto& walk = spec.faces[f];
    if (walk.empty()) {
      report(face_name(f) + " has an empty boundary");
      continue;
    }
    std::map<std::int64_t, std::int64_t> balance;
    bool in_range = true;
    for (auto [e, sign] : walk) {
      if (e < 0 || e >= edge_count) {
        report(face_name(f) + " references unknown edge " + edge_name(e));
        in_range = false;
        continue;
      }
      if (sign != 1 && sign != -1) {
        report(face_name(f) + " uses sign " + std::to_string(sign) +
               " on " + edge_name(e));
        in_range = false;
        continue;
      }
      uses[e].emplace_back(f, sign);
      balance[spec.edges[e].second] += sign;
      balance[spec.edges[e].first] -= sign;
    }
    if (in_range) {
      for (auto [v, b] : balance) {
        if (b != 0) {
          report(face_name(f) + " boundary is not a closed walk at v" +
                 std::to_string(v));
          break;
        }
      }
    }
  }
  for (std::int64_t e = 0; e < edge_count; ++e) {
    const auto& u = uses[e];
    if (u.empty()) {
      report(edge_name(e) + " is in no face boundary");
    } else if (u.size() == 1) {
      report(edge_name(e) + " is an edge with only one incident face (" +
             face_name(u[0].first) + ")");
    } else if (u.size() > 2) {
      report(edge_name(e) + " appears in " + std::to_string(u.size()) +
             " face boundaries");
    } else if (u[0].first == u[1].first) {
      report(edge_name(e) + " appears twice in " + face_name(u[0].first));
    } else if (u[0].second == u[1].second) {
      report(edge_name(e) + " is traversed in the same direction by " +
             face_name(u[0].first) + " and " + face_name(u[1].first));
    }
  }
  if (spec.external && (*spec.external < 0 || *spec.external >= face_count)) {
    report("external face index out of range");
  }
  if (spec.distinguished &&
      (*spec.distinguished < 0 || *spec.distinguished >= face_count)) {
    report("distinguished face index out of range");
  }
  return out;
}

Complex Complex::grid(std::optional<CellId> distinguished) {
  Complex c;
  c.kind_ = ComplexKind::kGrid;
  c.dimension_ = 2;
  if (distinguished) c.check_face(*distinguished);
  c.distinguished_ = distinguished;
  return c;
}

Complex Complex::nd_grid(int dimension, std::optional<CellId> distinguished) {
  if (dimension < 2 || dimension > kMaxDimension) {
    throw Error(ErrorCode::kInvalidArgument,
                "n-dimensional grid needs 2 <= n <= " +
                    std::to_string(kMaxDimension));
  }
  Complex c;
  c.kind_ = ComplexKind::kNdGrid;
  c.dimension_ = dimension;
  if (distinguished) c.check_face(*distinguished);
  c.distinguished_ = distinguished;
  return c;
}

Complex Complex::planar(const PlanarSpec& spec) {
  auto violations = flowfire::validate(spec);
  if (!violations.empty()) {
    std::string message = "invalid planar complex:";
    for (const auto& v : violations) message += "\n  " + v.message;
    throw Error(ErrorCode::kInvalidComplex, message);
  }
  auto data = std::make_shared<PlanarData>();
  data->spec = spec;
  const auto edge_count = spec.edges.size();
  const auto face_count = spec.faces.size();
  for (auto [t, h] : spec.edges) {
    data->vertex_count = std::max({data->vertex_count, t + 1, h + 1});
  }
  data->edge_faces.resize(edge_count);
  std::vector<int> filled(edge_count, 0);
  data->boundaries.resize(face_count);
  data->neighbors.resize(face_count);
  for (std::size_t f = 0; f < face_count; ++f) {
    const auto face = CellId::planar_face(static_cast<std::int64_t>(f));
    for (auto [e, sign] : spec.faces[f]) {
      data->boundaries[f].push_back({CellId::planar_edge(e), sign});
      data->edge_faces[e][filled[e]++] = {face, sign};
    }
  }
  for (auto& pair : data->edge_faces) {
    if (pair[1].cell < pair[0].cell) std::swap(pair[0], pair[1]);
    data->neighbors[pair[0].cell.index()].push_back(pair[1].cell);
    data->neighbors[pair[1].cell.index()].push_back(pair[0].cell);
  }
  for (auto& n : data->neighbors) {
    std::sort(n.begin(), n.end());
    n.erase(std::unique(n.begin(), n.end()), n.end());
  }
  data->vertex_edges.resize(data->vertex_count);
  for (std::size_t e = 0; e < edge_count; ++e) {
    const auto edge = CellId::planar_edge(static_cast<std::int64_t>(e));
    data->vertex_edges[spec.edges[e].first].push_back(edge);
    if (spec.edges[e].second != spec.edges[e].first) {
      data->vertex_edges[spec.edges[e].second].push_back(edge);
    }
  }
  Complex c;
  c.kind_ = ComplexKind::kPlanar;
  c.dimension_ = 2;
  c.planar_ = std::move(data);
  if (spec.distinguished) {
    c.distinguished_ = CellId::planar_face(*spec.distinguished);
  }
  return c;
}

std::optional<CellId> Complex::external_face() const {
  if (kind_ != ComplexKind::kPlanar || !planar_->spec.external) {
    return std::nullopt;
  }
  return CellId::planar_face(*planar_->spec.external);
}

Complex Complex::with_distinguished(std::optional<CellId> sigma) const {
  if (sigma) check_face(*sigma);
  Complex c = *this;
  c.distinguished_ = sigma;
  return c;
}

bool Complex::has_face(const CellId& cell) const {
  switch (kind_) {
    case ComplexKind::kGrid:
      return cell.kind == CellKind::kGridFace && cell.rank == 2;
    case ComplexKind::kNdGrid:
      return cell.kind == CellKind::kNdFacet && cell.rank == dimension_;
    case ComplexKind::kPlanar:
      return cell.kind == CellKind::kPlanarFace && cell.index() >= 0 &&
             cell.index() <
                 static_cast<std::int64_t>(planar_->spec.faces.size());
  }
  return false;
}

bool Complex::has_edge(const CellId& cell) const {
  switch (kind_) {
    case ComplexKind::kGrid:
      return cell.kind == CellKind::kGridEdge && cell.rank == 2 &&
             cell.axis <= 1;
    case ComplexKind::kNdGrid:
      return cell.kind == CellKind::kNdRidge && cell.rank == dimension_ &&
             cell.axis < dimension_;
    case ComplexKind::kPlanar:
      return cell.kind == CellKind::kPlanarEdge && cell.index() >= 0 &&
             cell.index() <
                 static_cast<std::int64_t>(planar_->spec.edges.size());
  }
  return false;
}

bool Complex::has_vertex(const CellId& cell) const {
  switch (kind_) {
    case ComplexKind::kGrid:
      return cell.kind == CellKind::kGridVertex && cell.rank == 2;
    case ComplexKind::kNdGrid:
      return false;
    case ComplexKind::kPlanar:
      return cell.kind == CellKind::kPlanarVertex && cell.index() >= 0 &&
             cell.index() < planar_->vertex_count &&
             !planar_->vertex_edges[cell.index()].empty();
  }
  return false;
}

void Complex::check_face(const CellId& face) const {
  if (!has_face(face)) {
    throw Error(ErrorCode::kUnknownFace, "unknown face " + to_string(face),
                to_string(face));
  }
}

void Complex::check_edge(const CellId& edge) const {
  if (!has_edge(edge)) {
    throw Error(ErrorCode::kUnknownEdge, "unknown edge " + to_string(edge),
                to_string(edge));
  }
}

void Complex::check_vertex(const CellId& vertex) const {
  if (!supports_edges()) {
    throw Error(ErrorCode::kUnsupported,
                "vertices are not modelled on the n-dimensional grid");
  }
  if (!has_vertex(vertex)) {
    throw Error(ErrorCode::kUnknownVertex,
                "unknown vertex " + to_string(vertex), to_string(vertex));
  }
}

std::array<SignedCell, 2> Complex::incident_faces(const CellId& edge) const {
  check_edge(edge);
  switch (kind_) {
    case ComplexKind::kGrid: {
      const auto x = edge.x(), y = edge.y();
      if (edge.axis == static_cast<std::uint8_t>(Axis::kHorizontal)) {
        // Top edge of the face below, bottom edge of the face above.
        return {SignedCell{CellId::grid_face(x, y - 1), +1},
                SignedCell{CellId::grid_face(x, y), -1}};
      }
      // Right edge of the face to the left, left edge of the face itself.
      return {SignedCell{CellId::grid_face(x - 1, y), -1},
              SignedCell{CellId::grid_face(x, y), +1}};
    }
    case ComplexKind::kNdGrid: {
      CellId lower = CellId::facet(edge.position());
      CellId upper = lower;
      lower.coords[edge.axis] -= 1;
      return {SignedCell{lower, +1}, SignedCell{upper, -1}};
    }
    case ComplexKind::kPlanar:
      return planar_->edge_faces[edge.index()];
  }
  return {};
}

std::vector<SignedCell> Complex::boundary(const CellId& face) const {
  check_face(face);
  switch (kind_) {
    case ComplexKind::kGrid: {
      const auto x = face.x(), y = face.y();
      // Clockwise walk from the top-left corner.
      return {{CellId::horizontal(x, y + 1), +1},
              {CellId::vertical(x + 1, y), -1},
              {CellId::horizontal(x, y), -1},
              {CellId::vertical(x, y), +1}};
    }
    case ComplexKind::kNdGrid: {
      std::vector<SignedCell> out;
      for (int i = 0; i < dimension_; ++i) {
        CellId low = CellId::ridge(i, face.position());
        CellId high = low;
        high.coords[i] += 1;
        out.push_back({low, -1});
        out.push_back({high, +1});
      }
      return out;
    }
    case ComplexKind::kPlanar:
      return planar_->boundaries[face.index()];
  }
  return {};
}

std::vector<CellId> Complex::neighbors(const CellId& face) const {
  check_face(face);
  switch (kind_) {
    case ComplexKind::kGrid: {
      const auto x = face.x(), y = face.y();
      return {CellId::grid_face(x - 1, y), CellId::grid_face(x, y - 1),
              CellId::grid_face(x, y + 1), CellId::grid_face(x + 1, y)};
    }
    case ComplexKind::kNdGrid: {
      std::vector<CellId> out;
      out.reserve(2 * dimension_);
      for (int i = 0; i < dimension_; ++i) {
        CellId lo = face, hi = face;
        lo.coords[i] -= 1;
        hi.coords[i] += 1;
        out.push_back(lo);
        out.push_back(hi);
      }
      std::sort(out.begin(), out.end());
      return out;
    }
    case ComplexKind::kPlanar:
      return planar_->neighbors[face.index()];
  }
  return {};
}

std::vector<CellId> Complex::shared_edges(const CellId& a,
                                          const CellId& b) const {
  check_face(a);
  check_face(b);
  std::vector<CellId> out;
  switch (kind_) {
    case ComplexKind::kGrid: {
      const auto dx = b.x() - a.x(), dy = b.y() - a.y();
      if (dx == 1 && dy == 0) out.push_back(CellId::vertical(b.x(), b.y()));
      if (dx == -1 && dy == 0) out.push_back(CellId::vertical(a.x(), a.y()));
      if (dx == 0 && dy == 1) out.push_back(CellId::horizontal(b.x(), b.y()));
      if (dx == 0 && dy == -1) out.push_back(CellId::horizontal(a.x(), a.y()));
      return out;
    }
    case ComplexKind::kNdGrid: {
      int axis = -1;
      for (int i = 0; i < dimension_; ++i) {
        const auto d = b.coords[i] - a.coords[i];
        if (d == 0) continue;
        if (std::llabs(d) != 1 || axis >= 0) return out;
        axis = i;
      }
      if (axis < 0) return out;
      const CellId& upper = b.coords[axis] > a.coords[axis] ? b : a;
      out.push_back(CellId::ridge(axis, upper.position()));
      return out;
    }
    case ComplexKind::kPlanar: {
      if (a == b) return out;
      for (const auto& [edge, sign] : planar_->boundaries[a.index()]) {
        const auto& pair = planar_->edge_faces[edge.index()];
        if (pair[0].cell == b || pair[1].cell == b) out.push_back(edge);
      }
      std::sort(out.begin(), out.end());
      return out;
    }
  }
  return out;
}

bool Complex::edge_on_face(const CellId& edge, const CellId& face) const {
  auto pair = incident_faces(edge);
  return pair[0].cell == face || pair[1].cell == face;
}

std::pair<CellId, CellId> Complex::endpoints(const CellId& edge) const {
  if (!supports_edges()) {
    throw Error(ErrorCode::kUnsupported,
                "ridge endpoints are not modelled on the n-dimensional grid");
  }
  check_edge(edge);
  if (kind_ == ComplexKind::kGrid) {
    const auto x = edge.x(), y = edge.y();
    if (edge.axis == static_cast<std::uint8_t>(Axis::kHorizontal)) {
      return {CellId::grid_vertex(x, y), CellId::grid_vertex(x + 1, y)};
    }
    return {CellId::grid_vertex(x, y), CellId::grid_vertex(x, y + 1)};
  }
  const auto [t, h] = planar_->spec.edges[edge.index()];
  return {CellId::planar_vertex(t), CellId::planar_vertex(h)};
}

std::vector<CellId> Complex::edges_at(const CellId& vertex) const {
  check_vertex(vertex);
  if (kind_ == ComplexKind::kGrid) {
    const auto x = vertex.x(), y = vertex.y();
    return {CellId::horizontal(x - 1, y), CellId::horizontal(x, y),
            CellId::vertical(x, y - 1), CellId::vertical(x, y)};
  }
  return planar_->vertex_edges[vertex.index()];
}

int Complex::degree(const CellId& vertex) const {
  check_vertex(vertex);
  if (kind_ == ComplexKind::kGrid) return 4;
  int d = 0;
  for (const auto& e : planar_->vertex_edges[vertex.index()]) {
    const auto [t, h] = planar_->spec.edges[e.index()];
    d += (t == h) ? 2 : 1;
  }
  return d;
}

std::vector<std::int64_t> Complex::planar_distances_from(
    std::int64_t face) const {
  std::vector<std::int64_t> dist(planar_->spec.faces.size(), -1);
  std::deque<std::int64_t> queue{face};
  dist[face] = 0;
  while (!queue.empty()) {
    const auto f = queue.front();
    queue.pop_front();
    for (const auto& n : planar_->neighbors[f]) {
      if (dist[n.index()] < 0) {
        dist[n.index()] = dist[f] + 1;
        queue.push_back(n.index());
      }
    }
  }
  return dist;
}

std::int64_t Complex::dual_distance(const CellId& from,
                                    const CellId& to) const {
  check_face(from);
  check_face(to);
  switch (kind_) {
    case ComplexKind::kGrid:
    case ComplexKind::kNdGrid: {
      std::int64_t d = 0;
      for (int i = 0; i < from.rank; ++i) {
        d += std::llabs(from.coords[i] - to.coords[i]);
      }
      return d;
    }
    case ComplexKind::kPlanar: {
      const auto d = planar_distances_from(from.index())[to.index()];
      if (d < 0) {
        throw Error(ErrorCode::kUnreachable,
                    to_string(to) + " is unreachable from " + to_string(from));
      }
      return d;
    }
  }
  return 0;
}

std::vector<std::pair<CellId, std::int64_t>> Complex::faces_within(
    const CellId& center, std::int64_t radius) const {
  check_face(center);
  std::vector<std::pair<CellId, std::int64_t>> out;
  if (radius < 0) return out;
  switch (kind_) {
    case ComplexKind::kGrid:
    case ComplexKind::kNdGrid: {
      std::array<std::int64_t, kMaxDimension> offset{};
      collect_nd_ball(0, dimension_, radius, offset, center, out, 0);
      break;
    }
    case ComplexKind::kPlanar: {
      const auto dist = planar_distances_from(center.index());
      for (std::size_t f = 0; f < dist.size(); ++f) {
        if (dist[f] >= 0 && dist[f] <= radius) {
          out.emplace_back(CellId::planar_face(static_cast<std::int64_t>(f)),
                           dist[f]);
        }
      }
      break;
    }
  }
  return out;
}

std::vector<CellId> Complex::faces() const {
  if (!is_finite()) {
    throw Error(ErrorCode::kUnsupported, "infinite complex has no face list");
  }
  std::vector<CellId> out;
  for (std::size_t f = 0; f < planar_->spec.faces.size(); ++f) {
    out.push_back(CellId::planar_face(static_cast<std::int64_t>(f)));
  }
  return out;
}

std::vector<CellId> Complex::edges() const {
  if (!is_finite()) {
    throw Error(ErrorCode::kUnsupported, "infinite complex has no edge list");
  }
  std::vector<CellId> out;
  for (std::size_t e = 0; e < planar_->spec.edges.size(); ++e) {
    out.push_back(CellId::planar_edge(static_cast<std::int64_t>(e)));
  }
  return out;
}

std::vector<CellId> Complex::vertices() const {
  if (!is_finite()) {
    throw Error(ErrorCode::kUnsupported,
                "infinite complex has no vertex list");
  }
  std::vector<CellId> out;
  for (std::int64_t v = 0; v < planar_->vertex_count; ++v) {
    if (!planar_->vertex_edges[v].empty()) {
      out.push_back(CellId::planar_vertex(v));
    }
  }
  return out;
}

const PlanarSpec* Complex::planar_spec() const {
  return planar_ ? &planar_->spec : nullptr;
}

std::vector<Violation> Complex::validate() const {
  if (kind_ != ComplexKind::kPlanar) return {};
  return flowfire::validate(planar_->spec);
}

}  // namespace flowfire
