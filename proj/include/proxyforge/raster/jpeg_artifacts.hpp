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

#include "proxyforge/raster/image.hpp"

namespace proxyforge::raster {

// IJG quality scaling of an Annex K base table, entries clamped to [1, 255].
std::array<int, 64> scaled_quant_table(const std::array<int, 64>& base, int quality);

const std::array<int, 64>& annex_k_luma_table() noexcept;
const std::array<int, 64>& annex_k_chroma_table() noexcept;

// Simulates baseline JPEG at `quality` (1..100): YCbCr with 4:2:0 chroma,
// 8x8 DCT, quantize/dequantize, inverse DCT, back to RGB. No entropy coding;
// only the quantization artifacts are reproduced.
ImageBuf jpeg_roundtrip(const ImageBuf& img, int quality);

}  // namespace proxyforge::raster
