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
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "proxyforge/proxytasks/task_kind.hpp"

namespace proxyforge::proxytasks {

using Json = nlohmann::ordered_json;

// Tasks without sampled knobs (segmentation, detection, reconstruction).
struct NoParams {
  friend bool operator==(const NoParams&, const NoParams&) = default;
};

struct EdgeParams {
  double low = 100.0;
  double high = 200.0;
  int blur_size = 5;
  double blur_sigma = 1.4;
  friend bool operator==(const EdgeParams&, const EdgeParams&) = default;
};

struct DepthParams {
  double depth_min = 0.0;
  double depth_max = 0.0;
  friend bool operator==(const DepthParams&, const DepthParams&) = default;
};

// Full-span stroke from (x0, y0) to (x1, y1); pixels whose centers lie within
// thickness/2 of the segment are masked.
struct InpaintStroke {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  double thickness = 1;
  friend bool operator==(const InpaintStroke&, const InpaintStroke&) = default;
};

struct InpaintBlock {
  int x = 0, y = 0, w = 0, h = 0;
  friend bool operator==(const InpaintBlock&, const InpaintBlock&) = default;
};

enum class InpaintMode { kLines, kBlocks };

struct InpaintParams {
  InpaintMode mode = InpaintMode::kBlocks;
  std::uint8_t fill = 0;  // 0 or 255
  std::vector<InpaintStroke> strokes;
  std::vector<InpaintBlock> blocks;
  double occupancy = 0.0;  // masked fraction of the frame
  friend bool operator==(const InpaintParams&, const InpaintParams&) = default;
};

struct IsrParams {
  int factor = 2;
  int low_width = 1;
  int low_height = 1;
  friend bool operator==(const IsrParams&, const IsrParams&) = default;
};

struct DeblurParams {
  int length = 10;
  double angle_deg = 0.0;
  friend bool operator==(const DeblurParams&, const DeblurParams&) = default;
};

struct LowLightParams {
  double brightness_scale = 1.0;
  double noise_intensity = 0.0;  // sigma = intensity * 255
  std::uint64_t noise_seed = 0;
  friend bool operator==(const LowLightParams&, const LowLightParams&) = default;
};

enum class NoiseKind { kGaussian, kJpeg, kSaltPepper, kPoisson };

std::string_view noise_kind_name(NoiseKind kind) noexcept;

// `value` is sigma, quality, or amount depending on kind (unused for Poisson).
struct NoiseOp {
  NoiseKind kind = NoiseKind::kGaussian;
  double value = 0.0;
  std::uint64_t seed = 0;
  friend bool operator==(const NoiseOp&, const NoiseOp&) = default;
};

struct DenoiseParams {
  std::vector<NoiseOp> ops;  // in application order
  friend bool operator==(const DenoiseParams&, const DenoiseParams&) = default;
};

enum class RestorationKind { kDerain, kDehaze };

std::string_view restoration_kind_name(RestorationKind kind) noexcept;

// Externally supplied pair; no sampled knobs, only which source it came from.
struct ExternalPairParams {
  RestorationKind kind = RestorationKind::kDerain;
  friend bool operator==(const ExternalPairParams&, const ExternalPairParams&) = default;
};

using DegradationParams = std::variant<NoParams, EdgeParams, DepthParams, InpaintParams, IsrParams,
                                       DeblurParams, LowLightParams, DenoiseParams, ExternalPairParams>;

Json params_to_json(const DegradationParams& params);

// Inverse of params_to_json for the params shape of `task`. Throws
// InvalidConfig on schema errors.
DegradationParams params_from_json(TaskKind task, const Json& j);

}  // namespace proxyforge::proxytasks
