// Copyright 2026 The ProxyForge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "proxyforge/raster/image.hpp"

namespace proxyforge::raster {

// COCO-style box: top-left corner plus extent, in pixels.
struct BBox {
  double x = 0, y = 0, w = 0, h = 0;
};

// Integer pixel rectangle [x0, x1) x [y0, y1), clamped to the frame.
struct PixelRect {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  bool empty() const noexcept { return x1 <= x0 || y1 <= y0; }
};

PixelRect to_pixel_rect(const BBox& box, int width, int height) noexcept;

// Strokes the four sides of `box` inward with the given thickness.
// Throws DegenerateParam for thickness < 1.
void draw_rect(ImageBuf& img, const BBox& box, Rgb color, int thickness);

inline constexpr int kGlyphWidth = 5;
inline constexpr int kGlyphHeight = 7;
inline constexpr int kGlyphCellWidth = kGlyphWidth + 1;
inline constexpr int kGlyphCellHeight = kGlyphHeight + 1;

// Columns of the 5x7 glyph for `ch`, bit 0 = top row. Characters outside
// printable ASCII render as '?'.
const std::array<std::uint8_t, kGlyphWidth>& glyph(char ch) noexcept;

// Tag extent for `text`: one 6x8 cell per character plus a 1 px leading
// border on the left and top.
int label_width(std::string_view text) noexcept;
int label_height() noexcept;

// Fills a tag of `color` with its top-left corner at (x, y) and draws the
// text in white. Pixels outside the frame are clipped.
void draw_label(ImageBuf& img, int x, int y, std::string_view text, Rgb color);

}  // namespace proxyforge::raster
