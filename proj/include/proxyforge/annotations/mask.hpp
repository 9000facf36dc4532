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

#include <cstdint>
#include <span>
#include <vector>

namespace proxyforge::annotations {

// Row-major boolean grid.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  bool get(int row, int col) const noexcept {
    return bits_[static_cast<std::size_t>(row) * width_ + col] != 0;
  }
  void set(int row, int col, bool value = true) noexcept {
    bits_[static_cast<std::size_t>(row) * width_ + col] = value ? 1 : 0;
  }

  std::size_t popcount() const noexcept;
  bool empty() const noexcept { return popcount() == 0; }

  // In-place union with a mask of the same shape.
  void merge(const BinaryMask& other);

  std::span<const std::uint8_t> row(int r) const noexcept {
    return {bits_.data() + static_cast<std::size_t>(r) * width_, static_cast<std::size_t>(width_)};
  }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

// COCO uncompressed RLE: alternating run lengths over the column-major
// flattening, starting with a (possibly empty) background run.
std::vector<std::uint64_t> encode_rle(const BinaryMask& mask);

// Throws RleLengthMismatch unless the runs cover exactly width * height pixels.
BinaryMask decode_rle(std::span<const std::uint64_t> counts, int width, int height);

struct Point {
  double x = 0;
  double y = 0;
};

// Even-odd fill with the pixel-center rule: (row, col) is set iff
// (col + 0.5, row + 0.5) lies inside. Throws DegeneratePolygon for fewer than
// three vertices or zero signed area.
BinaryMask rasterize_polygon(std::span<const Point> vertices, int width, int height);

double polygon_area(std::span<const Point> vertices) noexcept;

}  // namespace proxyforge::annotations
