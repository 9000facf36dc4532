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

#include "proxyforge/raster/noise.hpp"

#include <cmath>

#include "proxyforge/error.hpp"

namespace proxyforge::raster {

ImageBuf add_gaussian_noise(const ImageBuf& img, double sigma, Rng64& rng) {
  if (!(sigma >= 0.0)) fail(ErrorCode::kDegenerateParam, "gaussian sigma must be >= 0");
  if (sigma == 0.0) return img;
  ImageBuf out = img;
  for (auto& v : out.data()) v = quantize(v + sigma * rng.normal());
  return out;
}

ImageBuf add_salt_pepper(const ImageBuf& img, double amount, Rng64& rng) {
  if (!(amount >= 0.0 && amount <= 1.0)) fail(ErrorCode::kDegenerateParam, "salt-pepper amount must be in [0, 1]");
  if (amount == 0.0) return img;
  ImageBuf out = img;
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      const double u = rng.uniform();
      if (u < amount * 0.5) {
        out.set_rgb(x, y, {0, 0, 0});
      } else if (u < amount) {
        out.set_rgb(x, y, {255, 255, 255});
      }
    }
  }
  return out;
}

int poisson_draw(double mean, Rng64& rng) {
  if (mean <= 0.0) return 0;
  const double u = rng.uniform();
  double p = std::exp(-mean);
  double cdf = p;
  int k = 0;
  // The cap guards against cdf saturating just below u from rounding.
  const int cap = static_cast<int>(mean + 40.0 * std::sqrt(mean) + 40.0);
  while (u >= cdf && k < cap) {
    ++k;
    p *= mean / k;
    cdf += p;
  }
  return k;
}

ImageBuf add_poisson_noise(const ImageBuf& img, Rng64& rng) {
  ImageBuf out = img;
  for (auto& v : out.data()) v = quantize(poisson_draw(v, rng));
  return out;
}

}  // namespace proxyforge::raster
