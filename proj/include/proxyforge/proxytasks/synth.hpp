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

#include <filesystem>
#include <optional>
#include <vector>

#include "proxyforge/annotations/coco.hpp"
#include "proxyforge/proxytasks/params.hpp"
#include "proxyforge/proxytasks/task_kind.hpp"
#include "proxyforge/raster/filter.hpp"
#include "proxyforge/raster/float_map.hpp"
#include "proxyforge/raster/image.hpp"
#include "proxyforge/raster/rng.hpp"

namespace proxyforge::proxytasks {

using raster::ImageBuf;

// Sampling ranges for every stochastic synthesizer.
struct InpaintConfig {
  double p_lines = 0.5;
  int strokes_min = 3;
  int strokes_max = 8;
  double thickness_min = 0.02;  // fraction of min(width, height)
  double thickness_max = 0.06;
  int blocks_min = 1;
  int blocks_max = 4;
  double block_min = 0.10;  // fraction of each dimension
  double block_max = 0.30;
  double p_white = 0.5;
  friend bool operator==(const InpaintConfig&, const InpaintConfig&) = default;
};

struct IsrConfig {
  std::vector<int> factors{2, 4, 6, 8};
  friend bool operator==(const IsrConfig&, const IsrConfig&) = default;
};

struct DeblurConfig {
  std::vector<int> lengths{10, 20, 30};
  friend bool operator==(const DeblurConfig&, const DeblurConfig&) = default;
};

struct LowLightConfig {
  double scale_min = 0.1;
  double scale_max = 0.5;
  double intensity_min = 0.01;
  double intensity_max = 0.04;
  friend bool operator==(const LowLightConfig&, const LowLightConfig&) = default;
};

struct DenoiseConfig {
  double p_apply = 0.5;
  double sigma_min = 5.0;
  double sigma_max = 25.0;
  int quality_min = 10;
  int quality_max = 50;
  double amount_min = 0.01;
  double amount_max = 0.05;
  friend bool operator==(const DenoiseConfig&, const DenoiseConfig&) = default;
};

struct EdgeConfig {
  double low = raster::kCannyLowDefault;
  double high = raster::kCannyHighDefault;
  friend bool operator==(const EdgeConfig&, const EdgeConfig&) = default;
};

struct SynthConfig {
  InpaintConfig inpaint;
  IsrConfig isr;
  DeblurConfig deblur;
  LowLightConfig lowlight;
  DenoiseConfig denoise;
  EdgeConfig edge;
  int box_thickness = 3;
  friend bool operator==(const SynthConfig&, const SynthConfig&) = default;
};

// A synthesized pair. `condition` is set only when the model input differs
// from the source image (restoration tasks); otherwise the source image is
// the condition.
struct Synthesized {
  TaskKind task = TaskKind::kReconstruction;
  std::optional<ImageBuf> condition;
  ImageBuf target;
  DegradationParams params;
};

// Offset separating thing-instance palette indices from category indices in
// panoptic targets.
inline constexpr int kPanopticThingOffset = 2048;

// --- high level -------------------------------------------------------------

// Category colors painted in annotation order (later instances win);
// background black.
Synthesized synth_semantic_seg(const ImageBuf& img, const annotations::AnnotationSet& ann);
// Color = palette index of the 1-based dense instance position.
Synthesized synth_instance_seg(const ImageBuf& img, const annotations::AnnotationSet& ann);
// Stuff by category id; things by kPanopticThingOffset + dense thing index.
Synthesized synth_panoptic_seg(const ImageBuf& img, const annotations::AnnotationSet& ann);
// Copy of the image with each box stroked in its category color plus a
// name tag above the box (inside it when there is no room above).
Synthesized synth_detection(const ImageBuf& img, const annotations::AnnotationSet& ann,
                            int thickness = 3);

// Recovers palette indices from a pseudo-color target; -1 where a pixel is not
// a palette color.
std::vector<int> decode_label_map(const ImageBuf& target);

// --- mid level --------------------------------------------------------------

// Min-max normalize, quantize half-up, replicate to three channels. A
// constant map gives an all-black target. Throws NonFiniteDepth.
ImageBuf synth_depth_target(const raster::FloatMap& depth);
Synthesized synth_depth(const ImageBuf& img, const raster::FloatMap& depth);

InpaintParams sample_inpaint_params(raster::Rng64& rng, int width, int height,
                                    const InpaintConfig& cfg = {});
// Masked-pixel grid (row-major, 1 = corrupted) for recorded params.
std::vector<std::uint8_t> inpaint_mask(const InpaintParams& params, int width, int height);
ImageBuf apply_inpaint(const ImageBuf& img, const InpaintParams& params);
Synthesized synth_inpainting(const ImageBuf& img, raster::Rng64& rng, const InpaintConfig& cfg = {});

// --- low level --------------------------------------------------------------

Synthesized synth_edge(const ImageBuf& img, const EdgeConfig& cfg = {});

IsrParams sample_isr_params(raster::Rng64& rng, int width, int height, const IsrConfig& cfg = {});
ImageBuf apply_isr(const ImageBuf& img, const IsrParams& params);
Synthesized synth_isr(const ImageBuf& img, raster::Rng64& rng, const IsrConfig& cfg = {});

// Anti-aliased line of `length` unit-spaced samples at `angle_deg`, offsets
// -floor(L/2) .. L-1-floor(L/2) from the center cell, bilinearly splatted and
// normalized to sum 1. Even lengths get an (L+1) x (L+1) grid so the kernel
// has a center cell; the extra row and column stay mostly zero.
raster::Kernel motion_blur_kernel(int length, double angle_deg);
DeblurParams sample_deblur_params(raster::Rng64& rng, const DeblurConfig& cfg = {});
ImageBuf apply_deblur(const ImageBuf& img, const DeblurParams& params);
Synthesized synth_deblur(const ImageBuf& img, raster::Rng64& rng, const DeblurConfig& cfg = {});

ImageBuf scale_brightness(const ImageBuf& img, double scale);
LowLightParams sample_lowlight_params(raster::Rng64& rng, const LowLightConfig& cfg = {});
ImageBuf apply_lowlight(const ImageBuf& img, const LowLightParams& params);
Synthesized synth_lowlight(const ImageBuf& img, raster::Rng64& rng, const LowLightConfig& cfg = {});

DenoiseParams sample_denoise_params(raster::Rng64& rng, const DenoiseConfig& cfg = {});
ImageBuf apply_denoise(const ImageBuf& img, const DenoiseParams& params);
Synthesized synth_denoise(const ImageBuf& img, raster::Rng64& rng, const DenoiseConfig& cfg = {});

// Equal-probability choice between the two external restoration sources.
RestorationKind draw_restoration_kind(raster::Rng64& rng);

// Registers an externally supplied pair. Throws DimensionMismatch.
Synthesized ingest_paired_restoration(const std::filesystem::path& clean,
                                      const std::filesystem::path& degraded, RestorationKind kind);

Synthesized synth_reconstruction(const ImageBuf& img);

// --- dispatch ---------------------------------------------------------------

struct SynthInputs {
  const ImageBuf* image = nullptr;
  const annotations::AnnotationSet* annotations = nullptr;
  const raster::FloatMap* depth = nullptr;
};

// Runs the synthesizer for `task` (all but DerainDehaze, which is ingested).
Synthesized synthesize(TaskKind task, const SynthInputs& in, raster::Rng64& rng,
                       const SynthConfig& cfg = {});

// Re-synthesizes from recorded params without consuming any rng.
Synthesized replay_from_params(TaskKind task, const SynthInputs& in, const DegradationParams& params,
                               const SynthConfig& cfg = {});

}  // namespace proxyforge::proxytasks
