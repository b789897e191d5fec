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

#ifndef FLOWFIRE_RENDER_H_
#define FLOWFIRE_RENDER_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "flowfire/complex.h"
#include "flowfire/engine.h"

namespace flowfire {

// Inclusive range of grid faces F(x0..x1, y0..y1).
struct Window {
  std::int64_t x0 = 0, y0 = 0, x1 = 0, y1 = 0;
};

// Parses "x0,y0,x1,y1".
Window parse_window(std::string_view text);

enum class RenderFormat { kAscii, kSvg };

// Deterministic drawing of a configuration. On the grid the window is
// required. Face values print as stacked counts (zero as '.', the hole
// suffixed '*'); edge flow prints as arrows with multiplicity (" 2>" is two
// units West to East, "<1 " one unit East to West, "^3"/"v3" vertical).
// Other complexes print a sorted listing.
std::string render(const Complex& complex, const State& state,
                   RenderFormat format, std::optional<Window> window);

}  // namespace flowfire

#endif  // FLOWFIRE_RENDER_H_
