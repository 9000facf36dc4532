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

#include <cstdint>
#include <filesystem>
#include <vector>

#include "proxyforge/raster/image.hpp"

namespace proxyforge::raster {

// Reads PNG or baseline JPEG (sniffed from the file signature) into an 8-bit
// image with 1 or 3 channels. Alpha is dropped. Throws IoFailure/MissingFile.
ImageBuf read_image(const std::filesystem::path& path);

// Lossless PNG with fixed encoder settings, so equal images give equal bytes.
void write_png(const std::filesystem::path& path, const ImageBuf& img);

// 16-bit grayscale PNG (depth maps).
struct Gray16 {
  int width = 0;
  int height = 0;
  std::vector<std::uint16_t> data;
};

Gray16 read_png16(const std::filesystem::path& path);
void write_png16(const std::filesystem::path& path, const Gray16& img);

}  // namespace proxyforge::raster
