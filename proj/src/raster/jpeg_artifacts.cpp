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

#include "proxyforge/raster/jpeg_artifacts.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "proxyforge/error.hpp"

namespace proxyforge::raster {
namespace {

constexpr std::array<int, 64> kLuma = {
    16, 11, 10, 16, 24,  40,  51,  61,  12, 12, 14, 19, 26,  58,  60,  55,
    14, 13, 16, 24, 40,  57,  69,  56,  14, 17, 22, 29, 51,  87,  80,  62,
    18, 22, 37, 56, 68,  109, 103, 77,  24, 35, 55, 64, 81,  104, 113, 92,
    49, 64, 78, 87, 103, 121, 120, 101, 72, 92, 95, 98, 112, 100, 103, 99};

constexpr std::array<int, 64> kChroma = {
    17, 18, 24, 47, 99, 99, 99, 99, 18, 21, 26, 66, 99, 99, 99, 99,
    24, 26, 56, 99, 99, 99, 99, 99, 47, 66, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99};

struct Plane {
  int width = 0;
  int height = 0;
  std::vector<double> v;

  double& at(int x, int y) { return v[static_cast<std::size_t>(y) * width + x]; }
  double at_clamped(int x, int y) const {
    x = std::clamp(x, 0, width - 1);
    y = std::clamp(y, 0, height - 1);
    return v[static_cast<std::size_t>(y) * width + x];
  }
};

// cos((2x + 1) u pi / 16) scaled by the orthonormal C(u) factor.
const std::array<double, 64>& dct_basis() {
  static const std::array<double, 64> basis = [] {
    std::array<double, 64> b{};
    const double pi = 3.14159265358979323846;
    for (int u = 0; u < 8; ++u) {
      const double cu = u == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
      for (int x = 0; x < 8; ++x) b[static_cast<std::size_t>(u * 8 + x)] = cu * std::cos((2 * x + 1) * u * pi / 16.0);
    }
    return b;
  }();
  return basis;
}

void quantize_plane(Plane& p, const std::array<int, 64>& table) {
  const auto& basis = dct_basis();
  const int bw = (p.width + 7) / 8;
  const int bh = (p.height + 7) / 8;
  std::array<double, 64> block{};
  std::array<double, 64> tmp{};
  std::array<double, 64> coef{};
  for (int by = 0; by < bh; ++by) {
    for (int bx = 0; bx < bw; ++bx) {
      for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x)
          block[static_cast<std::size_t>(y * 8 + x)] = p.at_clamped(bx * 8 + x, by * 8 + y) - 128.0;

      // Forward: rows then columns.
      for (int y = 0; y < 8; ++y)
        for (int u = 0; u < 8; ++u) {
          double s = 0;
          for (int x = 0; x < 8; ++x) s += basis[static_cast<std::size_t>(u * 8 + x)] * block[static_cast<std::size_t>(y * 8 + x)];
          tmp[static_cast<std::size_t>(y * 8 + u)] = s;
        }
      for (int v = 0; v < 8; ++v)
        for (int u = 0; u < 8; ++u) {
          double s = 0;
          for (int y = 0; y < 8; ++y) s += basis[static_cast<std::size_t>(v * 8 + y)] * tmp[static_cast<std::size_t>(y * 8 + u)];
          const auto q = static_cast<double>(table[static_cast<std::size_t>(v * 8 + u)]);
          coef[static_cast<std::size_t>(v * 8 + u)] = std::round(s / q) * q;
        }

      // Inverse: columns then rows.
      for (int y = 0; y < 8; ++y)
        for (int u = 0; u < 8; ++u) {
          double s = 0;
          for (int v = 0; v < 8; ++v) s += basis[static_cast<std::size_t>(v * 8 + y)] * coef[static_cast<std::size_t>(v * 8 + u)];
          tmp[static_cast<std::size_t>(y * 8 + u)] = s;
        }
      for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) {
          const int px = bx * 8 + x;
          const int py = by * 8 + y;
          if (px >= p.width || py >= p.height) continue;
          double s = 0;
          for (int u = 0; u < 8; ++u) s += basis[static_cast<std::size_t>(u * 8 + x)] * tmp[static_cast<std::size_t>(y * 8 + u)];
          p.at(px, py) = std::clamp(s + 128.0, 0.0, 255.0);
        }
    }
  }
}

}  // namespace

const std::array<int, 64>& annex_k_luma_table() noexcept { return kLuma; }
const std::array<int, 64>& annex_k_chroma_table() noexcept { return kChroma; }

std::array<int, 64> scaled_quant_table(const std::array<int, 64>& base, int quality) {
  quality = std::clamp(quality, 1, 100);
  const int scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;
  std::array<int, 64> out{};
  for (std::size_t i = 0; i < 64; ++i) out[i] = std::clamp((base[i] * scale + 50) / 100, 1, 255);
  return out;
}

ImageBuf jpeg_roundtrip(const ImageBuf& img, int quality) {
  if (img.channels() != 3) fail(ErrorCode::kDegenerateParam, "jpeg_roundtrip needs a 3-channel image");
  if (quality < 1 || quality > 100) fail(ErrorCode::kDegenerateParam, "jpeg quality must be in [1, 100]");
  const int w = img.width();
  const int h = img.height();

  Plane y_plane{w, h, std::vector<double>(img.pixel_count())};
  Plane cb_full{w, h, std::vector<double>(img.pixel_count())};
  Plane cr_full{w, h, std::vector<double>(img.pixel_count())};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double r = img.at(x, y, 0), g = img.at(x, y, 1), b = img.at(x, y, 2);
      y_plane.at(x, y) = 0.299 * r + 0.587 * g + 0.114 * b;
      cb_full.at(x, y) = -0.168736 * r - 0.331264 * g + 0.5 * b + 128.0;
      cr_full.at(x, y) = 0.5 * r - 0.418688 * g - 0.081312 * b + 128.0;
    }
  }

  const int cw = (w + 1) / 2;
  const int chh = (h + 1) / 2;
  auto subsample = [&](const Plane& full) {
    Plane out{cw, chh, std::vector<double>(static_cast<std::size_t>(cw) * chh)};
    for (int y = 0; y < chh; ++y)
      for (int x = 0; x < cw; ++x)
        out.at(x, y) = 0.25 * (full.at_clamped(2 * x, 2 * y) + full.at_clamped(2 * x + 1, 2 * y) +
                               full.at_clamped(2 * x, 2 * y + 1) + full.at_clamped(2 * x + 1, 2 * y + 1));
    return out;
  };
  Plane cb = subsample(cb_full);
  Plane cr = subsample(cr_full);

  quantize_plane(y_plane, scaled_quant_table(kLuma, quality));
  const auto chroma_table = scaled_quant_table(kChroma, quality);
  quantize_plane(cb, chroma_table);
  quantize_plane(cr, chroma_table);

  ImageBuf out(w, h, 3);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double yy = y_plane.at(x, y);
      const double cbv = cb.at(x / 2, y / 2) - 128.0;
      const double crv = cr.at(x / 2, y / 2) - 128.0;
      out.at(x, y, 0) = quantize(yy + 1.402 * crv);
      out.at(x, y, 1) = quantize(yy - 0.344136 * cbv - 0.714136 * crv);
      out.at(x, y, 2) = quantize(yy + 1.772 * cbv);
    }
  }
  return out;
}

}  // namespace proxyforge::raster
