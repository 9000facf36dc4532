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

namespace proxyforge::raster {

// Single-channel float grid (depth estimates), row-major.
struct FloatMap {
  int width = 0;
  int height = 0;
  std::vector<float> data;

  float at(int x, int y) const noexcept { return data[static_cast<std::size_t>(y) * width + x]; }
  float& at(int x, int y) noexcept { return data[static_cast<std::size_t>(y) * width + x]; }
};

}  // namespace proxyforge::raster
