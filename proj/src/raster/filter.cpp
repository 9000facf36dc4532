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

#include "proxyforge/raster/filter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "proxyforge/error.hpp"

namespace proxyforge::raster {
namespace {

struct Tap {
  int dy;
  int dx;
  double w;
};

std::vector<Tap> nonzero_taps(const Kernel& k) {
  if (k.rows < 1 || k.cols < 1 || k.rows % 2 == 0 || k.cols % 2 == 0 ||
      k.weights.size() != static_cast<std::size_t>(k.rows) * k.cols) {
    fail(ErrorCode::kDegenerateParam, "kernel dimensions must be odd and match its weights");
  }
  std::vector<Tap> taps;
  const int ry = k.rows / 2;
  const int rx = k.cols / 2;
  for (int r = 0; r < k.rows; ++r)
    for (int c = 0; c < k.cols; ++c)
      if (k.at(r, c) != 0.0) taps.push_back({r - ry, c - rx, k.at(r, c)});
  return taps;
}

template <typename Get, typename Put>
void correlate(int width, int height, int channels, const std::vector<Tap>& taps, Get get,
               Put put) {
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < channels; ++c) {
        double acc = 0.0;
        for (const Tap& t : taps) {
          const int sy = std::clamp(y + t.dy, 0, height - 1);
          const int sx = std::clamp(x + t.dx, 0, width - 1);
          acc += t.w * get(sx, sy, c);
        }
        put(x, y, c, acc);
      }
    }
  }
}

}  // namespace

double Kernel::sum() const noexcept {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

Kernel gaussian_kernel(int size, double sigma) {
  Kernel k{size, size, std::vector<double>(static_cast<std::size_t>(size) * size)};
  const int r = size / 2;
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double dy = y - r;
      const double dx = x - r;
      k.weights[static_cast<std::size_t>(y) * size + x] =
          std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
    }
  }
  const double s = k.sum();
  for (double& w : k.weights) w /= s;
  return k;
}

ImageBuf resize_bilinear(const ImageBuf& img, int out_w, int out_h) {
  if (out_w < 1 || out_h < 1) fail(ErrorCode::kDegenerateParam, "resize target must be >= 1x1");
  if (out_w == img.width() && out_h == img.height()) return img;

  const double scale_x = static_cast<double>(img.width()) / out_w;
  const double scale_y = static_cast<double>(img.height()) / out_h;
  ImageBuf out(out_w, out_h, img.channels());

  struct Taps {
    int i0, i1;
    double f;
  };
  auto taps_for = [](int dst, double scale, int src_len) {
    double s = (dst + 0.5) * scale - 0.5;
    s = std::clamp(s, 0.0, static_cast<double>(src_len - 1));
    const int i0 = static_cast<int>(std::floor(s));
    const int i1 = std::min(i0 + 1, src_len - 1);
    return Taps{i0, i1, s - i0};
  };

  std::vector<Taps> xs(static_cast<std::size_t>(out_w));
  for (int x = 0; x < out_w; ++x) xs[static_cast<std::size_t>(x)] = taps_for(x, scale_x, img.width());

  for (int y = 0; y < out_h; ++y) {
    const Taps ty = taps_for(y, scale_y, img.height());
    for (int x = 0; x < out_w; ++x) {
      const Taps& tx = xs[static_cast<std::size_t>(x)];
      for (int c = 0; c < img.channels(); ++c) {
        const double top = (1.0 - tx.f) * img.at(tx.i0, ty.i0, c) + tx.f * img.at(tx.i1, ty.i0, c);
        const double bot = (1.0 - tx.f) * img.at(tx.i0, ty.i1, c) + tx.f * img.at(tx.i1, ty.i1, c);
        out.at(x, y, c) = quantize((1.0 - ty.f) * top + ty.f * bot);
      }
    }
  }
  return out;
}

ImageBuf convolve(const ImageBuf& img, const Kernel& kernel) {
  const auto taps = nonzero_taps(kernel);
  ImageBuf out(img.width(), img.height(), img.channels());
  correlate(
      img.width(), img.height(), img.channels(), taps,
      [&](int x, int y, int c) { return static_cast<double>(img.at(x, y, c)); },
      [&](int x, int y, int c, double v) { out.at(x, y, c) = quantize(v); });
  return out;
}

FloatImage convolve(const FloatImage& img, const Kernel& kernel) {
  const auto taps = nonzero_taps(kernel);
  FloatImage out{img.width, img.height, img.channels, std::vector<float>(img.data.size())};
  correlate(
      img.width, img.height, img.channels, taps,
      [&](int x, int y, int c) { return static_cast<double>(img.at(x, y, c)); },
      [&](int x, int y, int c, double v) { out.at(x, y, c) = static_cast<float>(v); });
  return out;
}

ImageBuf canny(const ImageBuf& img, double low, double high) {
  if (!(low < high)) fail(ErrorCode::kDegenerateParam, "canny requires low < high");
  const int w = img.width();
  const int h = img.height();

  const FloatImage smooth = convolve(luma(img), gaussian_kernel(kCannyBlurSize, kCannyBlurSigma));
  auto s = [&](int x, int y) {
    return static_cast<double>(smooth.at(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1), 0));
  };

  std::vector<double> mag(static_cast<std::size_t>(w) * h);
  std::vector<std::uint8_t> dir(mag.size());  // 0: E-W, 1: NE-SW, 2: N-S, 3: NW-SE
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double gx = (s(x + 1, y - 1) + 2 * s(x + 1, y) + s(x + 1, y + 1)) -
                        (s(x - 1, y - 1) + 2 * s(x - 1, y) + s(x - 1, y + 1));
      const double gy = (s(x - 1, y + 1) + 2 * s(x, y + 1) + s(x + 1, y + 1)) -
                        (s(x - 1, y - 1) + 2 * s(x, y - 1) + s(x + 1, y - 1));
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      mag[i] = std::hypot(gx, gy);
      double angle = std::atan2(gy, gx) * 180.0 / 3.14159265358979323846;
      if (angle < 0) angle += 180.0;
      if (angle < 22.5 || angle >= 157.5) dir[i] = 0;
      else if (angle < 67.5) dir[i] = 1;
      else if (angle < 112.5) dir[i] = 2;
      else dir[i] = 3;
    }
  }

  auto m = [&](int x, int y) {
    if (x < 0 || y < 0 || x >= w || y >= h) return 0.0;
    return mag[static_cast<std::size_t>(y) * w + x];
  };

  // Non-maximum suppression; strict on the "behind" neighbour and non-strict
  // ahead so that a two-pixel plateau yields a single-pixel edge.
  std::vector<double> thin(mag.size(), 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      double a, b;
      switch (dir[i]) {
        case 0: a = m(x - 1, y); b = m(x + 1, y); break;
        case 1: a = m(x - 1, y + 1); b = m(x + 1, y - 1); break;
        case 2: a = m(x, y - 1); b = m(x, y + 1); break;
        default: a = m(x - 1, y - 1); b = m(x + 1, y + 1); break;
      }
      if (mag[i] > a && mag[i] >= b) thin[i] = mag[i];
    }
  }

  // 0: none, 1: weak, 2: edge
  std::vector<std::uint8_t> state(mag.size(), 0);
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < thin.size(); ++i) {
    if (thin[i] > high) {
      state[i] = 2;
      stack.push_back(i);
    } else if (thin[i] > low) {
      state[i] = 1;
    }
  }
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    const int x = static_cast<int>(i % static_cast<std::size_t>(w));
    const int y = static_cast<int>(i / static_cast<std::size_t>(w));
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int nx = x + dx;
        const int ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
        const std::size_t j = static_cast<std::size_t>(ny) * w + nx;
        if (state[j] == 1) {
          state[j] = 2;
          stack.push_back(j);
        }
      }
    }
  }

  ImageBuf out(w, h, 3);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (state[static_cast<std::size_t>(y) * w + x] == 2) out.set_rgb(x, y, {255, 255, 255});
  return out;
}

}  // namespace proxyforge::raster
