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

#include "proxyforge/raster/palette.hpp"

#include <array>
#include <cmath>
#include <string>
#include <unordered_map>

#include "proxyforge/error.hpp"

namespace proxyforge::raster {
namespace {

constexpr double kGoldenFraction = 0.61803398875;
constexpr std::array<double, 5> kValueLadder = {0.95, 0.85, 0.75, 0.65, 0.55};
constexpr std::array<double, 4> kSaturationLadder = {0.85, 0.70, 0.55, 0.40};

std::uint32_t pack(Rgb c) noexcept {
  return (std::uint32_t{c[0]} << 16) | (std::uint32_t{c[1]} << 8) | std::uint32_t{c[2]};
}

struct PaletteTable {
  std::array<Rgb, kPaletteMaxIndex + 1> colors{};
  std::unordered_map<std::uint32_t, int> inverse;

  PaletteTable() {
    colors[0] = {0, 0, 0};
    inverse.emplace(0u, 0);
    for (int i = 1; i <= kPaletteMaxIndex; ++i) {
      double hue = i * kGoldenFraction;
      hue -= std::floor(hue);
      bool placed = false;
      // Hue nudges only kick in if the whole ladder is taken; never for 4096.
      for (int nudge = 0; !placed; ++nudge) {
        double h = hue + nudge * 1e-3;
        h -= std::floor(h);
        for (double v : kValueLadder) {
          for (double s : kSaturationLadder) {
            const Rgb c = hsv_to_rgb8(h, s, v);
            if (inverse.emplace(pack(c), i).second) {
              colors[static_cast<std::size_t>(i)] = c;
              placed = true;
              break;
            }
          }
          if (placed) break;
        }
      }
    }
  }
};

const PaletteTable& table() {
  static const PaletteTable t;
  return t;
}

}  // namespace

Rgb hsv_to_rgb8(double h, double s, double v) noexcept {
  const double h6 = h * 6.0;
  const double sector = std::floor(h6);
  const double f = h6 - sector;
  const double p = v * (1.0 - s);
  const double q = v * (1.0 - s * f);
  const double t = v * (1.0 - s * (1.0 - f));
  double r, g, b;
  switch (static_cast<int>(sector) % 6) {
    case 0: r = v; g = t; b = p; break;
    case 1: r = q; g = v; b = p; break;
    case 2: r = p; g = v; b = t; break;
    case 3: r = p; g = q; b = v; break;
    case 4: r = t; g = p; b = v; break;
    default: r = v; g = p; b = q; break;
  }
  return {quantize(r * 255.0), quantize(g * 255.0), quantize(b * 255.0)};
}

Rgb palette_color(int index) {
  if (index < 0 || index > kPaletteMaxIndex) {
    fail(ErrorCode::kPaletteOverflow, "palette index " + std::to_string(index) +
                                          " outside [0, " + std::to_string(kPaletteMaxIndex) + "]");
  }
  return table().colors[static_cast<std::size_t>(index)];
}

std::optional<int> palette_index(Rgb color) noexcept {
  const auto& inv = table().inverse;
  auto it = inv.find(pack(color));
  if (it == inv.end()) return std::nullopt;
  return it->second;
}

}  // namespace proxyforge::raster
