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

#include "proxyforge/annotations/mask.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "proxyforge/error.hpp"

namespace proxyforge::annotations {

BinaryMask::BinaryMask(int width, int height) : width_(width), height_(height) {
  if (width < 0 || height < 0) fail(ErrorCode::kDegenerateParam, "negative mask dimensions");
  bits_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
}

std::size_t BinaryMask::popcount() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

void BinaryMask::merge(const BinaryMask& other) {
  if (other.width_ != width_ || other.height_ != height_) {
    fail(ErrorCode::kMaskShapeMismatch, "cannot merge masks of different shapes");
  }
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= other.bits_[i];
}

std::vector<std::uint64_t> encode_rle(const BinaryMask& mask) {
  std::vector<std::uint64_t> counts;
  bool current = false;
  std::uint64_t run = 0;
  for (int c = 0; c < mask.width(); ++c) {
    for (int r = 0; r < mask.height(); ++r) {
      const bool v = mask.get(r, c);
      if (v != current) {
        counts.push_back(run);
        run = 0;
        current = v;
      }
      ++run;
    }
  }
  counts.push_back(run);
  return counts;
}

BinaryMask decode_rle(std::span<const std::uint64_t> counts, int width, int height) {
  const std::uint64_t total = static_cast<std::uint64_t>(width) * static_cast<std::uint64_t>(height);
  std::uint64_t sum = 0;
  for (std::uint64_t c : counts) {
    if (c > total || sum > total - c) {
      fail(ErrorCode::kRleLengthMismatch, "RLE runs exceed " + std::to_string(total) + " pixels");
    }
    sum += c;
  }
  if (sum != total) {
    fail(ErrorCode::kRleLengthMismatch,
         "RLE runs sum to " + std::to_string(sum) + ", expected " + std::to_string(total));
  }
  BinaryMask mask(width, height);
  std::uint64_t pos = 0;
  bool fg = false;
  for (std::uint64_t run : counts) {
    if (fg) {
      for (std::uint64_t i = pos; i < pos + run; ++i) {
        const auto col = static_cast<int>(i / static_cast<std::uint64_t>(height));
        const auto row = static_cast<int>(i % static_cast<std::uint64_t>(height));
        mask.set(row, col);
      }
    }
    pos += run;
    fg = !fg;
  }
  return mask;
}

double polygon_area(std::span<const Point> v) noexcept {
  double twice = 0.0;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    twice += v[j].x * v[i].y - v[i].x * v[j].y;
  }
  return 0.5 * twice;
}

BinaryMask rasterize_polygon(std::span<const Point> vertices, int width, int height) {
  if (vertices.size() < 3) fail(ErrorCode::kDegeneratePolygon, "polygon needs at least 3 vertices");
  if (std::abs(polygon_area(vertices)) == 0.0) fail(ErrorCode::kDegeneratePolygon, "polygon has zero area");
  for (const Point& p : vertices) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) fail(ErrorCode::kDegeneratePolygon, "non-finite vertex");
  }

  BinaryMask mask(width, height);
  std::vector<double> crossings;
  const std::size_t n = vertices.size();
  for (int r = 0; r < height; ++r) {
    const double y = r + 0.5;
    crossings.clear();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Point& a = vertices[i];
      const Point& b = vertices[j];
      // Half-open in y so shared vertices are counted once.
      if ((a.y > y) != (b.y > y)) {
        crossings.push_back((b.x - a.x) * (y - a.y) / (b.y - a.y) + a.x);
      }
    }
    if (crossings.empty()) continue;
    std::sort(crossings.begin(), crossings.end());
    // Inside iff an odd number of crossings lie strictly right of the center.
    for (int c = 0; c < width; ++c) {
      const double x = c + 0.5;
      const auto right = crossings.end() - std::upper_bound(crossings.begin(), crossings.end(), x);
      if (right % 2 == 1) mask.set(r, c);
    }
  }
  return mask;
}

}  // namespace proxyforge::annotations
