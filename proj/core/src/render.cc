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

#include "flowfire/render.h"

#include <charconv>
#include <sstream>
#include <vector>

namespace flowfire {

namespace {

constexpr int kCell = 40;

std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string horizontal_glyph(std::int64_t v) {
  if (v > 0) return pad_left(std::to_string(v) + ">", 3);
  if (v < 0) return pad_right("<" + std::to_string(-v), 3);
  return "   ";
}

std::string vertical_glyph(std::int64_t v) {
  if (v > 0) return pad_right("^" + std::to_string(v), 3);
  if (v < 0) return pad_right("v" + std::to_string(-v), 3);
  return "   ";
}

std::string ascii_faces(const Complex& complex, const FaceRep& faces,
                        const Window& w) {
  std::string out;
  for (auto y = w.y1; y >= w.y0; --y) {
    std::string line;
    for (auto x = w.x0; x <= w.x1; ++x) {
      const auto face = CellId::grid_face(x, y);
      const auto v = faces.get(face);
      line += pad_left(v == 0 ? "." : std::to_string(v), 3);
      line += complex.distinguished() == face ? '*' : ' ';
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + '\n';
  }
  return out;
}

std::string ascii_edges(const Complex& complex, const EdgeFlow& flow,
                        const Window& w) {
  std::string out;
  auto trim = [](std::string line) {
    while (!line.empty() && line.back() == ' ') line.pop_back();
    return line + '\n';
  };
  for (auto vy = w.y1 + 1; vy >= w.y0; --vy) {
    std::string vertex_row;
    for (auto vx = w.x0; vx <= w.x1 + 1; ++vx) {
      vertex_row += '+';
      if (vx <= w.x1) vertex_row += horizontal_glyph(flow.get(CellId::horizontal(vx, vy)));
    }
    out += trim(vertex_row);
    if (vy == w.y0) break;
    std::string edge_row;
    for (auto vx = w.x0; vx <= w.x1 + 1; ++vx) {
      std::string glyph = vertical_glyph(flow.get(CellId::vertical(vx, vy - 1)));
      if (vx <= w.x1 &&
          complex.distinguished() == CellId::grid_face(vx, vy - 1)) {
        glyph += '#';
      } else if (vx <= w.x1) {
        glyph += ' ';
      }
      edge_row += glyph;
    }
    out += trim(edge_row);
  }
  return out;
}

std::string svg_header(std::int64_t width, std::int64_t height) {
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
    << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height
    << "\" font-family=\"monospace\" font-size=\"12\">\n";
  return s.str();
}

std::string svg_grid(const Complex& complex, const State& state,
                     const Window& w) {
  const auto cols = w.x1 - w.x0 + 1, rows = w.y1 - w.y0 + 1;
  const auto width = (cols + 1) * kCell, height = (rows + 1) * kCell;
  // Vertex (vx, vy) sits at pixel (px(vx), py(vy)); y grows upward.
  auto px = [&](std::int64_t vx) { return (vx - w.x0) * kCell + kCell / 2; };
  auto py = [&](std::int64_t vy) { return (w.y1 + 1 - vy) * kCell + kCell / 2; };
  std::ostringstream s;
  s << svg_header(width, height);
  for (auto y = w.y0; y <= w.y1; ++y) {
    for (auto x = w.x0; x <= w.x1; ++x) {
      const auto face = CellId::grid_face(x, y);
      const bool hole = complex.distinguished() == face;
      s << "<rect x=\"" << px(x) << "\" y=\"" << py(y + 1) << "\" width=\""
        << kCell << "\" height=\"" << kCell << "\" fill=\""
        << (hole ? "#bbbbbb" : "none") << "\" stroke=\"#dddddd\"/>\n";
      if (const auto* faces = std::get_if<FaceRep>(&state)) {
        const auto v = faces->get(face);
        if (v != 0) {
          s << "<text x=\"" << px(x) + kCell / 2 << "\" y=\""
            << py(y) - kCell / 2 + 4 << "\" text-anchor=\"middle\">" << v
            << "</text>\n";
        }
      }
    }
  }
  if (const auto* flow = std::get_if<EdgeFlow>(&state)) {
    for (const auto& [edge, v] : *flow) {
      const auto x = edge.x(), y = edge.y();
      const bool horizontal = edge.axis == 0;
      if (horizontal ? (x < w.x0 || x > w.x1 || y < w.y0 || y > w.y1 + 1)
                     : (x < w.x0 || x > w.x1 + 1 || y < w.y0 || y > w.y1)) {
        continue;
      }
      const auto x2 = horizontal ? x + 1 : x, y2 = horizontal ? y : y + 1;
      s << "<line x1=\"" << px(x) << "\" y1=\"" << py(y) << "\" x2=\"" << px(x2)
        << "\" y2=\"" << py(y2) << "\" stroke=\"#1f4e9c\" stroke-width=\""
        << 1 + 2 * std::min<std::int64_t>(std::llabs(v), 4) << "\"/>\n";
      const char* arrow = horizontal ? (v > 0 ? "&#8594;" : "&#8592;")
                                     : (v > 0 ? "&#8593;" : "&#8595;");
      s << "<text x=\"" << (px(x) + px(x2)) / 2 + (horizontal ? 0 : 6)
        << "\" y=\"" << (py(y) + py(y2)) / 2 - (horizontal ? 4 : 0)
        << "\" text-anchor=\"middle\">" << arrow << std::llabs(v)
        << "</text>\n";
    }
  }
  s << "</svg>\n";
  return s.str();
}

std::string listing(const Complex& complex, const State& state) {
  std::string out;
  std::visit(
      [&](const auto& field) {
        for (const auto& [cell, value] : field) {
          out += to_string(cell);
          if (complex.distinguished() == cell) out += '*';
          out += ' ' + std::to_string(value) + '\n';
        }
      },
      state);
  return out;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

}  // namespace

Window parse_window(std::string_view text) {
  std::int64_t v[4];
  for (int i = 0; i < 4; ++i) {
    const auto comma = i < 3 ? text.find(',') : text.size();
    if (comma == std::string_view::npos) {
      throw Error(ErrorCode::kParse, "window must be x0,y0,x1,y1");
    }
    const auto part = text.substr(0, comma);
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v[i]);
    if (ec != std::errc() || ptr != part.data() + part.size() || part.empty()) {
      throw Error(ErrorCode::kParse, "window must be x0,y0,x1,y1");
    }
    text = i < 3 ? text.substr(comma + 1) : std::string_view{};
  }
  if (v[0] > v[2] || v[1] > v[3]) {
    throw Error(ErrorCode::kParse, "window needs x0 <= x1 and y0 <= y1");
  }
  return {v[0], v[1], v[2], v[3]};
}

std::string render(const Complex& complex, const State& state,
                   RenderFormat format, std::optional<Window> window) {
  if (complex.kind() != ComplexKind::kGrid) {
    const std::string text = listing(complex, state);
    if (format == RenderFormat::kAscii) return text;
    std::ostringstream s;
    std::istringstream lines(text);
    std::vector<std::string> rows;
    for (std::string line; std::getline(lines, line);) rows.push_back(line);
    s << svg_header(320, 20 * (static_cast<std::int64_t>(rows.size()) + 1));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      s << "<text x=\"10\" y=\"" << 20 * (i + 1) << "\">" << escape(rows[i])
        << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
  }
  if (!window) {
    throw Error(ErrorCode::kInvalidArgument,
                "rendering the infinite grid needs a window");
  }
  if (format == RenderFormat::kSvg) return svg_grid(complex, state, *window);
  if (const auto* faces = std::get_if<FaceRep>(&state)) {
    return ascii_faces(complex, *faces, *window);
  }
  return ascii_edges(complex, std::get<EdgeFlow>(state), *window);
}

}  // namespace flowfire
