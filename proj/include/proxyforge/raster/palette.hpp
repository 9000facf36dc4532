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

#include <optional>

#include "proxyforge/raster/image.hpp"

namespace proxyforge::raster {

inline constexpr int kPaletteMaxIndex = 4096;

// Standard sexant HSV -> RGB conversion, each channel rounded half-up to 8 bits.
Rgb hsv_to_rgb8(double h, double s, double v) noexcept;

// Deterministic pseudo-color palette. Index 0 is black; index i >= 1 takes
// HSV(frac(i * 0.61803398875), 0.85, 0.95) unless that 8-bit color was already
// claimed by a smaller index, in which case the first unclaimed color on a
// fixed (saturation, value) ladder at the same hue is used. The table is
// therefore injective over [0, 4096]. Throws PaletteOverflow above 4096.
Rgb palette_color(int index);

// Inverse lookup; nullopt for colors outside the palette.
std::optional<int> palette_index(Rgb color) noexcept;

}  // namespace proxyforge::raster
