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

#include "proxyforge/raster/image.hpp"

#include <limits>

#include "proxyforge/error.hpp"

namespace proxyforge::raster {

ImageBuf::ImageBuf(int width, int height, int channels, std::uint8_t fill)
    : width_(width), height_(height), channels_(channels) {
  if (width < 1 || height < 1 || (channels != 1 && channels != 3)) {
    fail(ErrorCode::kDegenerateParam, "image must be at least 1x1 with 1 or 3 channels");
  }
  data_.assign(pixel_count() * static_cast<std::size_t>(channels), fill);
}

Rgb ImageBuf::rgb(int x, int y) const noexcept {
  if (channels_ == 1) {
    const auto v = at(x, y, 0);
    return {v, v, v};
  }
  return {at(x, y, 0), at(x, y, 1), at(x, y, 2)};
}

void ImageBuf::set_rgb(int x, int y, Rgb color) noexcept {
  if (channels_ == 1) {
    at(x, y, 0) = color[0];
    return;
  }
  for (int c = 0; c < 3; ++c) at(x, y, c) = color[static_cast<std::size_t>(c)];
}

FloatImage to_float(const ImageBuf& img) {
  FloatImage out{img.width(), img.height(), img.channels(), {}};
  out.data.assign(img.data().begin(), img.data().end());
  return out;
}

ImageBuf from_float(const FloatImage& img) {
  ImageBuf out(img.width, img.height, img.channels);
  auto dst = out.data();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = quantize(img.data[i]);
  return out;
}

ImageBuf to_rgb(const ImageBuf& img) {
  if (img.channels() == 3) return img;
  ImageBuf out(img.width(), img.height(), 3);
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) out.set_rgb(x, y, img.rgb(x, y));
  return out;
}

FloatImage luma(const ImageBuf& img) {
  FloatImage out{img.width(), img.height(), 1, {}};
  out.data.resize(img.pixel_count());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      float v;
      if (img.channels() == 1) {
        v = img.at(x, y, 0);
      } else {
        v = static_cast<float>(0.299 * img.at(x, y, 0) + 0.587 * img.at(x, y, 1) +
                               0.114 * img.at(x, y, 2));
      }
      out.at(x, y, 0) = v;
    }
  }
  return out;
}

double psnr(const ImageBuf& a, const ImageBuf& b) {
  if (!a.same_shape(b)) fail(ErrorCode::kDimensionMismatch, "psnr on differently shaped images");
  double sse = 0.0;
  auto da = a.data();
  auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) {
    const double d = static_cast<double>(da[i]) - static_cast<double>(db[i]);
    sse += d * d;
  }
  if (sse == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = sse / static_cast<double>(da.size());
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

}  // namespace proxyforge::raster
