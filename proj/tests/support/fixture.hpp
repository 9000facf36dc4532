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
#include <string>
#include <vector>

#include "proxyforge/raster/image.hpp"

namespace proxyforge::fixture {

struct FixtureOptions {
  int images = 200;
  int width = 64;
  int height = 64;
  int inconsistent_depth = 2;  // placed first in the seed-42 corpus order
  int restoration_pairs = 30;  // split evenly between derain and dehaze
  int vqa_refs = 300;
  std::uint64_t corpus_seed = 42;
  std::uint64_t quota = 100;
  std::uint64_t restoration_quota = 20;
};

struct FixturePaths {
  std::filesystem::path root;
  std::filesystem::path config;  // root/fixture.toml, out = "out"
  std::vector<std::string> inconsistent_ids;
};

// Synthetic sky/ground scenes with 1-4 objects, COCO-style annotations
// (polygons and uncompressed RLE), primary depth as .sgtd, secondary depth
// as 16-bit PNG, restoration pairs and opaque VQA references.
FixturePaths write_fixture(const std::filesystem::path& root, const FixtureOptions& opt = {});

// Left half black, right half white; the step sits between x = edge - 1 and x = edge.
raster::ImageBuf step_edge_image(int width, int height, int edge);

// Smooth shading plus fine texture; used where a degradation must be visible.
raster::ImageBuf reference_image(int width, int height);

// Fresh scratch directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

}  // namespace proxyforge::fixture
