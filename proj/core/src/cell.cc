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

#include <charconv>
#include <vector>

#include "flowfire/error.h"

namespace flowfire {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "Parse";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidComplex: return "InvalidComplex";
    case ErrorCode::kUnknownEdge: return "UnknownEdge";
    case ErrorCode::kUnknownFace: return "UnknownFace";
    case ErrorCode::kUnknownVertex: return "UnknownVertex";
    case ErrorCode::kUnreachable: return "Unreachable";
    case ErrorCode::kUnsupported: return "Unsupported";
    case ErrorCode::kNotConservative: return "NotConservative";
    case ErrorCode::kInconsistentIntegration: return "InconsistentIntegration";
    case ErrorCode::kSupportOutsideWindow: return "SupportOutsideWindow";
    case ErrorCode::kOverflow: return "Overflow";
    case ErrorCode::kIllegalMove: return "IllegalMove";
    case ErrorCode::kRepresentationMismatch: return "RepresentationMismatch";
    case ErrorCode::kMissingMonitor: return "MissingMonitor";
  }
  return "Unknown";
}

namespace {

CellId make(CellKind kind, std::uint8_t axis,
            std::span<const std::int64_t> coords) {
  if (coords.size() > static_cast<std::size_t>(kMaxDimension)) {
    throw Error(ErrorCode::kInvalidArgument,
                "cell rank exceeds " + std::to_string(kMaxDimension));
  }
  CellId cell;
  cell.kind = kind;
  cell.axis = axis;
  cell.rank = static_cast<std::uint8_t>(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) cell.coords[i] = coords[i];
  return cell;
}

std::string tuple_string(const CellId& cell) {
  std::string out = "(";
  for (int i = 0; i < cell.rank; ++i) {
    if (i > 0) out += ',';
    out += std::to_string(cell.coords[i]);
  }
  out += ')';
  return out;
}

[[noreturn]] void bad(std::string_view text) {
  throw Error(ErrorCode::kParse,
              "malformed cell identifier '" + std::string(text) + "'");
}

std::int64_t parse_int(std::string_view text, std::string_view whole) {
  std::int64_t value = 0;
  auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    bad(whole);
  }
  return value;
}

std::vector<std::int64_t> parse_tuple(std::string_view text,
                                      std::string_view whole) {
  if (text.size() < 2 || text.front() != '(' || text.back() != ')') bad(whole);
  text = text.substr(1, text.size() - 2);
  std::vector<std::int64_t> values;
  while (true) {
    auto comma = text.find(',');
    values.push_back(parse_int(text.substr(0, comma), whole));
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return values;
}

}  // namespace

CellId CellId::grid_vertex(std::int64_t x, std::int64_t y) {
  const std::int64_t c[] = {x, y};
  return make(CellKind::kGridVertex, 0, c);
}

CellId CellId::grid_edge(Axis axis, std::int64_t x, std::int64_t y) {
  const std::int64_t c[] = {x, y};
  return make(CellKind::kGridEdge, static_cast<std::uint8_t>(axis), c);
}

CellId CellId::grid_face(std::int64_t x, std::int64_t y) {
  const std::int64_t c[] = {x, y};
  return make(CellKind::kGridFace, 0, c);
}

CellId CellId::planar_vertex(std::int64_t index) {
  const std::int64_t c[] = {index};
  return make(CellKind::kPlanarVertex, 0, c);
}

CellId CellId::planar_edge(std::int64_t index) {
  const std::int64_t c[] = {index};
  return make(CellKind::kPlanarEdge, 0, c);
}

CellId CellId::planar_face(std::int64_t index) {
  const std::int64_t c[] = {index};
  return make(CellKind::kPlanarFace, 0, c);
}

CellId CellId::facet(std::span<const std::int64_t> position) {
  return make(CellKind::kNdFacet, 0, position);
}

CellId CellId::ridge(int axis, std::span<const std::int64_t> position) {
  if (axis < 0 || axis >= static_cast<int>(position.size())) {
    throw Error(ErrorCode::kInvalidArgument, "ridge axis out of range");
  }
  return make(CellKind::kNdRidge, static_cast<std::uint8_t>(axis), position);
}

std::string to_string(const CellId& cell) {
  switch (cell.kind) {
    case CellKind::kGridVertex: return "P" + tuple_string(cell);
    case CellKind::kGridEdge:
      return (cell.axis == 0 ? "H" : "V") + tuple_string(cell);
    case CellKind::kGridFace: return "F" + tuple_string(cell);
    case CellKind::kPlanarVertex: return "v" + std::to_string(cell.index());
    case CellKind::kPlanarEdge: return "e" + std::to_string(cell.index());
    case CellKind::kPlanarFace: return "f" + std::to_string(cell.index());
    case CellKind::kNdRidge:
      return "R" + std::to_string(cell.axis) + tuple_string(cell);
    case CellKind::kNdFacet: return "C" + tuple_string(cell);
  }
  return "?";
}

CellId parse_cell(std::string_view text) {
  if (text.empty()) bad(text);
  const char head = text.front();
  const std::string_view rest = text.substr(1);
  switch (head) {
    case 'P':
    case 'H':
    case 'V':
    case 'F': {
      auto values = parse_tuple(rest, text);
      if (values.size() != 2) bad(text);
      if (head == 'P') return CellId::grid_vertex(values[0], values[1]);
      if (head == 'F') return CellId::grid_face(values[0], values[1]);
      return CellId::grid_edge(head == 'H' ? Axis::kHorizontal : Axis::kVertical,
                       values[0], values[1]);
    }
    case 'v':
    case 'e':
    case 'f': {
      std::int64_t index = parse_int(rest, text);
      if (index < 0) bad(text);
      if (head == 'v') return CellId::planar_vertex(index);
      if (head == 'e') return CellId::planar_edge(index);
      return CellId::planar_face(index);
    }
    case 'C': {
      auto values = parse_tuple(rest, text);
      if (values.size() < 2 || values.size() > kMaxDimension) bad(text);
      return CellId::facet(values);
    }
    case 'R': {
      auto open = rest.find('(');
      if (open == std::string_view::npos) bad(text);
      std::int64_t axis = parse_int(rest.substr(0, open), text);
      auto values = parse_tuple(rest.substr(open), text);
      if (values.size() < 2 || values.size() > kMaxDimension || axis < 0 ||
          axis >= static_cast<std::int64_t>(values.size())) {
        bad(text);
      }
      return CellId::ridge(static_cast<int>(axis), values);
    }
    default: bad(text);
  }
}

std::size_t CellIdHash::operator()(const CellId& cell) const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  mix(static_cast<std::uint64_t>(cell.kind));
  mix(cell.axis);
  for (int i = 0; i < cell.rank; ++i) {
    mix(static_cast<std::uint64_t>(cell.coords[i]));
  }
  return static_cast<std::size_t>(h);
}

}  // namespace flowfire
