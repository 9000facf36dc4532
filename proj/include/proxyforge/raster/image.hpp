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
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace proxyforge::raster {

using Rgb = std::array<std::uint8_t, 3>;

// Half-up rounding to 8 bits, clamped to [0, 255]. The single rule used
// wherever float intermediates become samples.
inline std::uint8_t quantize(double v) noexcept {
  if (!(v > 0.0)) return 0;  // also maps NaN to 0
  const double r = std::floor(v + 0.5);
  return r >= 255.0 ? 255 : static_cast<std::uint8_t>(r);
}

// Row-major interleaved 8-bit image with 1 or 3 channels.
class ImageBuf {
 public:
  ImageBuf() = default;
  ImageBuf(int width, int height, int channels, std::uint8_t fill = 0);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  bool empty() const noexcept { return data_.empty(); }
  std::size_t size() const noexcept { return data_.size(); }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  std::uint8_t& at(int x, int y, int c) noexcept { return data_[index(x, y, c)]; }
  std::uint8_t at(int x, int y, int c) const noexcept { return data_[index(x, y, c)]; }

  Rgb rgb(int x, int y) const noexcept;
  void set_rgb(int x, int y, Rgb color) noexcept;

  std::span<std::uint8_t> data() noexcept { return data_; }
  std::span<const std::uint8_t> data() const noexcept { return data_; }

  bool same_shape(const ImageBuf& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_ && channels_ == other.channels_;
  }

  friend bool operator==(const ImageBuf&, const ImageBuf&) = default;

 private:
  std::size_t index(int x, int y, int c) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) * static_cast<std::size_t>(channels_) +
           static_cast<std::size_t>(c);
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<std::uint8_t> data_;
};

// Float32 view used for intermediate math; same layout as ImageBuf.
struct FloatImage {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<float> data;

  float& at(int x, int y, int c) noexcept {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  float at(int x, int y, int c) const noexcept {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
};

FloatImage to_float(const ImageBuf& img);
ImageBuf from_float(const FloatImage& img);

// Replicates a 1-channel image to 3 channels; 3-channel input is returned as is.
ImageBuf to_rgb(const ImageBuf& img);

// ITU-R BT.601 luma as float; 1-channel input passes through.
FloatImage luma(const ImageBuf& img);

// Peak signal-to-noise ratio in dB; +inf for identical images.
double psnr(const ImageBuf& a, const ImageBuf& b);

}  // namespace proxyforge::raster
