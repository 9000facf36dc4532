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

#include "proxyforge/raster/image.hpp"
#include "proxyforge/raster/rng.hpp"

namespace proxyforge::raster {

// Adds N(0, sigma^2) per sample (sigma in 0..255 units). sigma == 0 is identity.
ImageBuf add_gaussian_noise(const ImageBuf& img, double sigma, Rng64& rng);

// Each pixel independently becomes black with probability amount/2 and white
// with probability amount/2; all channels of a pixel move together.
ImageBuf add_salt_pepper(const ImageBuf& img, double amount, Rng64& rng);

// Replaces each sample v by a Poisson(v) draw (inverse-CDF search).
ImageBuf add_poisson_noise(const ImageBuf& img, Rng64& rng);

// Draws one Poisson(mean) variate by inverse-CDF search.
int poisson_draw(double mean, Rng64& rng);

}  // namespace proxyforge::raster
