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

#include <vector>

#include "proxyforge/raster/image.hpp"

namespace proxyforge::raster {

// Dense correlation kernel with odd dimensions; weights row-major.
struct Kernel {
  int rows = 0;
  int cols = 0;
  std::vector<double> weights;

  double at(int r, int c) const noexcept {
    return weights[static_cast<std::size_t>(r) * cols + c];
  }
  double sum() const noexcept;
};

Kernel gaussian_kernel(int size, double sigma);

// Bilinear resampling with the align-corners-false convention.
ImageBuf resize_bilinear(const ImageBuf& img, int out_w, int out_h);

// Per-channel correlation with replicate-edge padding. Zero taps are skipped,
// so sparse kernels (motion blur lines) cost O(nonzeros) per sample.
ImageBuf convolve(const ImageBuf& img, const Kernel& kernel);

// Float-in, float-out variant used by the edge detector; no rounding.
FloatImage convolve(const FloatImage& img, const Kernel& kernel);

inline constexpr double kCannyLowDefault = 100.0;
inline constexpr double kCannyHighDefault = 200.0;
inline constexpr int kCannyBlurSize = 5;
inline constexpr double kCannyBlurSigma = 1.4;

// Gaussian 5x5 (sigma 1.4) -> Sobel -> 4-direction NMS -> double threshold ->
// 8-connected hysteresis. Output is 3-channel, {0, 255}.
ImageBuf canny(const ImageBuf& img, double low = kCannyLowDefault,
               double high = kCannyHighDefault);

}  // namespace proxyforge::raster
