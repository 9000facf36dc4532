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

#include "proxyforge/proxytasks/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "proxyforge/error.hpp"
#include "proxyforge/raster/draw.hpp"
#include "proxyforge/raster/image_io.hpp"
#include "proxyforge/raster/jpeg_artifacts.hpp"
#include "proxyforge/raster/noise.hpp"
#include "proxyforge/raster/palette.hpp"

namespace proxyforge::proxytasks {
namespace {

using annotations::AnnotationSet;
using raster::palette_color;
using raster::Rng64;

void check_frame(const ImageBuf& img, const AnnotationSet& ann) {
  if (img.width() != ann.width || img.height() != ann.height) {
    fail(ErrorCode::kDimensionMismatch,
         "annotations for " + ann.image_id + " are " + std::to_string(ann.width) + "x" +
             std::to_string(ann.height) + " but the image is " + std::to_string(img.width()) + "x" +
             std::to_string(img.height()));
  }
}

void paint_mask(ImageBuf& target, const annotations::BinaryMask& mask, raster::Rgb color) {
  for (int r = 0; r < mask.height(); ++r) {
    const auto row = mask.row(r);
    for (int c = 0; c < mask.width(); ++c)
      if (row[static_cast<std::size_t>(c)]) target.set_rgb(c, r, color);
  }
}

Synthesized paired(TaskKind task, ImageBuf target, DegradationParams params = NoParams{}) {
  return Synthesized{task, std::nullopt, std::move(target), std::move(params)};
}

Synthesized restoration(TaskKind task, const ImageBuf& clean, ImageBuf degraded, DegradationParams params) {
  return Synthesized{task, std::move(degraded), clean, std::move(params)};
}

double segment_distance(double px, double py, const InpaintStroke& s) {
  const double vx = s.x1 - s.x0;
  const double vy = s.y1 - s.y0;
  const double len2 = vx * vx + vy * vy;
  double t = len2 > 0 ? ((px - s.x0) * vx + (py - s.y0) * vy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double dx = px - (s.x0 + t * vx);
  const double dy = py - (s.y0 + t * vy);
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace

Synthesized synth_semantic_seg(const ImageBuf& img, const AnnotationSet& ann) {
  check_frame(img, ann);
  ImageBuf target(img.width(), img.height(), 3);
  for (const auto& inst : ann.instances) paint_mask(target, inst.mask, palette_color(inst.category_id));
  return paired(TaskKind::kSemanticSeg, std::move(target));
}

Synthesized synth_instance_seg(const ImageBuf& img, const AnnotationSet& ann) {
  check_frame(img, ann);
  ImageBuf target(img.width(), img.height(), 3);
  int index = 0;
  for (const auto& inst : ann.instances) paint_mask(target, inst.mask, palette_color(++index));
  return paired(TaskKind::kInstanceSeg, std::move(target));
}

Synthesized synth_panoptic_seg(const ImageBuf& img, const AnnotationSet& ann) {
  check_frame(img, ann);
  ImageBuf target(img.width(), img.height(), 3);
  int things = 0;
  for (const auto& inst : ann.instances) {
    const auto* cat = ann.find_category(inst.category_id);
    const bool is_thing = cat == nullptr || cat->is_thing;
    int index;
    if (is_thing) {
      index = kPanopticThingOffset + ++things;
    } else {
      if (inst.category_id >= kPanopticThingOffset) {
        fail(ErrorCode::kPaletteOverflow, "stuff category id " + std::to_string(inst.category_id) +
                                              " collides with the thing index range");
      }
      index = inst.category_id;
    }
    paint_mask(target, inst.mask, palette_color(index));
  }
  return paired(TaskKind::kPanopticSeg, std::move(target));
}

Synthesized synth_detection(const ImageBuf& img, const AnnotationSet& ann, int thickness) {
  check_frame(img, ann);
  ImageBuf target = raster::to_rgb(img);
  for (const auto& inst : ann.instances) {
    const raster::BBox box{inst.bbox.x, inst.bbox.y, inst.bbox.w, inst.bbox.h};
    const raster::PixelRect r = raster::to_pixel_rect(box, img.width(), img.height());
    if (r.empty()) continue;
    const raster::Rgb color = palette_color(inst.category_id);
    raster::draw_rect(target, box, color, thickness);
    const auto* cat = ann.find_category(inst.category_id);
    const std::string name = cat ? cat->name : std::to_string(inst.category_id);
    const int tag_y = r.y0 - raster::label_height() >= 0 ? r.y0 - raster::label_height() : r.y0;
    raster::draw_label(target, r.x0, tag_y, name, color);
  }
  return paired(TaskKind::kDetection, std::move(target));
}

std::vector<int> decode_label_map(const ImageBuf& target) {
  std::vector<int> labels(target.pixel_count(), -1);
  for (int y = 0; y < target.height(); ++y)
    for (int x = 0; x < target.width(); ++x)
      if (auto idx = raster::palette_index(target.rgb(x, y)))
        labels[static_cast<std::size_t>(y) * target.width() + x] = *idx;
  return labels;
}

ImageBuf synth_depth_target(const raster::FloatMap& depth) {
  if (depth.width < 1 || depth.height < 1) fail(ErrorCode::kDegenerateParam, "empty depth map");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (float v : depth.data) {
    if (!std::isfinite(v)) fail(ErrorCode::kNonFiniteDepth, "depth map contains non-finite values");
    lo = std::min(lo, double(v));
    hi = std::max(hi, double(v));
  }
  ImageBuf out(depth.width, depth.height, 3);
  if (hi == lo) return out;
  const double range = hi - lo;
  for (int y = 0; y < depth.height; ++y) {
    for (int x = 0; x < depth.width; ++x) {
      const auto v = raster::quantize((depth.at(x, y) - lo) / range * 255.0);
      out.set_rgb(x, y, {v, v, v});
    }
  }
  return out;
}

Synthesized synth_depth(const ImageBuf& img, const raster::FloatMap& depth) {
  if (img.width() != depth.width || img.height() != depth.height) {
    fail(ErrorCode::kDimensionMismatch, "depth map and image differ in size");
  }
  ImageBuf target = synth_depth_target(depth);
  const auto [lo, hi] = std::minmax_element(depth.data.begin(), depth.data.end());
  return paired(TaskKind::kDepth, std::move(target), DepthParams{*lo, *hi});
}

InpaintParams sample_inpaint_params(Rng64& rng, int width, int height, const InpaintConfig& cfg) {
  InpaintParams p;
  const double min_dim = std::min(width, height);
  p.mode = rng.bernoulli(cfg.p_lines) ? InpaintMode::kLines : InpaintMode::kBlocks;
  p.fill = rng.bernoulli(cfg.p_white) ? 255 : 0;
  if (p.mode == InpaintMode::kLines) {
    const auto n = rng.between(cfg.strokes_min, cfg.strokes_max);
    for (std::int64_t i = 0; i < n; ++i) {
      InpaintStroke s;
      s.thickness = std::max(1.0, rng.uniform(cfg.thickness_min, cfg.thickness_max) * min_dim);
      if (rng.bernoulli(0.5)) {
        s.x0 = 0.0;
        s.y0 = rng.uniform(0.0, height);
        s.x1 = width;
        s.y1 = rng.uniform(0.0, height);
      } else {
        s.x0 = rng.uniform(0.0, width);
        s.y0 = 0.0;
        s.x1 = rng.uniform(0.0, width);
        s.y1 = height;
      }
      p.strokes.push_back(s);
    }
  } else {
    const auto n = rng.between(cfg.blocks_min, cfg.blocks_max);
    for (std::int64_t i = 0; i < n; ++i) {
      InpaintBlock b;
      b.w = std::clamp(static_cast<int>(std::lround(rng.uniform(cfg.block_min, cfg.block_max) * width)), 1, width);
      b.h = std::clamp(static_cast<int>(std::lround(rng.uniform(cfg.block_min, cfg.block_max) * height)), 1, height);
      b.x = static_cast<int>(rng.between(0, width - b.w));
      b.y = static_cast<int>(rng.between(0, height - b.h));
      p.blocks.push_back(b);
    }
  }
  const auto mask = inpaint_mask(p, width, height);
  const auto covered = std::count(mask.begin(), mask.end(), std::uint8_t{1});
  p.occupancy = static_cast<double>(covered) / static_cast<double>(mask.size());
  if (covered == 0) fail(ErrorCode::kDegenerateParam, "inpainting mask covers no pixels");
  return p;
}

std::vector<std::uint8_t> inpaint_mask(const InpaintParams& params, int width, int height) {
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(width) * height, 0);
  for (const auto& b : params.blocks) {
    for (int y = std::max(b.y, 0); y < std::min(b.y + b.h, height); ++y)
      for (int x = std::max(b.x, 0); x < std::min(b.x + b.w, width); ++x)
        mask[static_cast<std::size_t>(y) * width + x] = 1;
  }
  for (const auto& s : params.strokes) {
    const double half = s.thickness * 0.5;
    const int x_lo = std::max(0, static_cast<int>(std::floor(std::min(s.x0, s.x1) - half)));
    const int x_hi = std::min(width - 1, static_cast<int>(std::ceil(std::max(s.x0, s.x1) + half)));
    const int y_lo = std::max(0, static_cast<int>(std::floor(std::min(s.y0, s.y1) - half)));
    const int y_hi = std::min(height - 1, static_cast<int>(std::ceil(std::max(s.y0, s.y1) + half)));
    for (int y = y_lo; y <= y_hi; ++y)
      for (int x = x_lo; x <= x_hi; ++x)
        if (segment_distance(x + 0.5, y + 0.5, s) <= half) mask[static_cast<std::size_t>(y) * width + x] = 1;
  }
  return mask;
}

ImageBuf apply_inpaint(const ImageBuf& img, const InpaintParams& params) {
  const auto mask = inpaint_mask(params, img.width(), img.height());
  ImageBuf out = img;
  const raster::Rgb fill{params.fill, params.fill, params.fill};
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      if (mask[static_cast<std::size_t>(y) * img.width() + x]) out.set_rgb(x, y, fill);
  return out;
}

Synthesized synth_inpainting(const ImageBuf& img, Rng64& rng, const InpaintConfig& cfg) {
  InpaintParams p = sample_inpaint_params(rng, img.width(), img.height(), cfg);
  ImageBuf corrupted = apply_inpaint(img, p);
  return restoration(TaskKind::kInpainting, img, std::move(corrupted), std::move(p));
}

Synthesized synth_edge(const ImageBuf& img, const EdgeConfig& cfg) {
  return paired(TaskKind::kEdge, raster::canny(img, cfg.low, cfg.high),
                EdgeParams{cfg.low, cfg.high, raster::kCannyBlurSize, raster::kCannyBlurSigma});
}

IsrParams sample_isr_params(Rng64& rng, int width, int height, const IsrConfig& cfg) {
  if (cfg.factors.empty()) fail(ErrorCode::kInvalidConfig, "no super-resolution factors configured");
  const int k = cfg.factors[rng.below(cfg.factors.size())];
  if (k < 1) fail(ErrorCode::kInvalidConfig, "super-resolution factor must be >= 1");
  return IsrParams{k, std::max(1, width / k), std::max(1, height / k)};
}

ImageBuf apply_isr(const ImageBuf& img, const IsrParams& params) {
  const ImageBuf low = raster::resize_bilinear(img, params.low_width, params.low_height);
  return raster::resize_bilinear(low, img.width(), img.height());
}

Synthesized synth_isr(const ImageBuf& img, Rng64& rng, const IsrConfig& cfg) {
  IsrParams p = sample_isr_params(rng, img.width(), img.height(), cfg);
  return restoration(TaskKind::kIsr, img, apply_isr(img, p), p);
}

raster::Kernel motion_blur_kernel(int length, double angle_deg) {
  if (length < 1) fail(ErrorCode::kDegenerateParam, "blur length must be >= 1");
  const int half = length / 2;
  const int size = 2 * half + 1;
  raster::Kernel k{size, size, std::vector<double>(static_cast<std::size_t>(size) * size, 0.0)};
  const double rad = angle_deg * std::numbers::pi / 180.0;
  double dx = std::cos(rad);
  double dy = -std::sin(rad);
  if (std::abs(dx) < 1e-12) dx = 0.0;
  if (std::abs(dy) < 1e-12) dy = 0.0;
  auto splat = [&](int x, int y, double w) {
    if (w == 0.0 || x < 0 || y < 0 || x >= size || y >= size) return;
    k.weights[static_cast<std::size_t>(y) * size + x] += w;
  };
  for (int i = 0; i < length; ++i) {
    const double t = i - half;
    const double px = half + t * dx;
    const double py = half + t * dy;
    const int x0 = static_cast<int>(std::floor(px));
    const int y0 = static_cast<int>(std::floor(py));
    const double fx = px - x0;
    const double fy = py - y0;
    splat(x0, y0, (1 - fx) * (1 - fy));
    splat(x0 + 1, y0, fx * (1 - fy));
    splat(x0, y0 + 1, (1 - fx) * fy);
    splat(x0 + 1, y0 + 1, fx * fy);
  }
  const double s = k.sum();
  for (double& w : k.weights) w /= s;
  return k;
}

DeblurParams sample_deblur_params(Rng64& rng, const DeblurConfig& cfg) {
  if (cfg.lengths.empty()) fail(ErrorCode::kInvalidConfig, "no blur lengths configured");
  DeblurParams p;
  p.length = cfg.lengths[rng.below(cfg.lengths.size())];
  p.angle_deg = rng.uniform(0.0, 360.0);
  return p;
}

ImageBuf apply_deblur(const ImageBuf& img, const DeblurParams& params) {
  return raster::convolve(img, motion_blur_kernel(params.length, params.angle_deg));
}

Synthesized synth_deblur(const ImageBuf& img, Rng64& rng, const DeblurConfig& cfg) {
  DeblurParams p = sample_deblur_params(rng, cfg);
  return restoration(TaskKind::kDeblur, img, apply_deblur(img, p), p);
}

ImageBuf scale_brightness(const ImageBuf& img, double scale) {
  ImageBuf out = img;
  for (auto& v : out.data()) v = raster::quantize(v * scale);
  return out;
}

LowLightParams sample_lowlight_params(Rng64& rng, const LowLightConfig& cfg) {
  LowLightParams p;
  p.brightness_scale = rng.uniform(cfg.scale_min, cfg.scale_max);
  p.noise_intensity = rng.uniform(cfg.intensity_min, cfg.intensity_max);
  p.noise_seed = rng.fork();
  return p;
}

ImageBuf apply_lowlight(const ImageBuf& img, const LowLightParams& params) {
  Rng64 noise(params.noise_seed);
  return raster::add_gaussian_noise(scale_brightness(img, params.brightness_scale),
                                    params.noise_intensity * 255.0, noise);
}

Synthesized synth_lowlight(const ImageBuf& img, Rng64& rng, const LowLightConfig& cfg) {
  LowLightParams p = sample_lowlight_params(rng, cfg);
  return restoration(TaskKind::kLowLight, img, apply_lowlight(img, p), p);
}

DenoiseParams sample_denoise_params(Rng64& rng, const DenoiseConfig& cfg) {
  if (!(cfg.p_apply > 0.0)) fail(ErrorCode::kInvalidConfig, "denoise p_apply must be positive");
  std::array<NoiseKind, 4> order = {NoiseKind::kGaussian, NoiseKind::kJpeg, NoiseKind::kSaltPepper,
                                    NoiseKind::kPoisson};
  for (std::size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);
  std::array<bool, 4> include{};
  do {
    for (bool& b : include) b = rng.bernoulli(cfg.p_apply);
  } while (std::none_of(include.begin(), include.end(), [](bool b) { return b; }));

  DenoiseParams p;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (!include[i]) continue;
    NoiseOp op{order[i], 0.0, 0};
    switch (op.kind) {
      case NoiseKind::kGaussian: op.value = rng.uniform(cfg.sigma_min, cfg.sigma_max); break;
      case NoiseKind::kJpeg: op.value = static_cast<double>(rng.between(cfg.quality_min, cfg.quality_max)); break;
      case NoiseKind::kSaltPepper: op.value = rng.uniform(cfg.amount_min, cfg.amount_max); break;
      case NoiseKind::kPoisson: break;
    }
    op.seed = rng.fork();
    p.ops.push_back(op);
  }
  return p;
}

ImageBuf apply_denoise(const ImageBuf& img, const DenoiseParams& params) {
  ImageBuf out = img;
  for (const NoiseOp& op : params.ops) {
    Rng64 rng(op.seed);
    switch (op.kind) {
      case NoiseKind::kGaussian: out = raster::add_gaussian_noise(out, op.value, rng); break;
      case NoiseKind::kJpeg: out = raster::jpeg_roundtrip(raster::to_rgb(out), static_cast<int>(op.value)); break;
      case NoiseKind::kSaltPepper: out = raster::add_salt_pepper(out, op.value, rng); break;
      case NoiseKind::kPoisson: out = raster::add_poisson_noise(out, rng); break;
    }
  }
  return out;
}

Synthesized synth_denoise(const ImageBuf& img, Rng64& rng, const DenoiseConfig& cfg) {
  DenoiseParams p = sample_denoise_params(rng, cfg);
  ImageBuf degraded = apply_denoise(img, p);
  return restoration(TaskKind::kDenoise, img, std::move(degraded), std::move(p));
}

RestorationKind draw_restoration_kind(Rng64& rng) {
  return rng.bernoulli(0.5) ? RestorationKind::kDerain : RestorationKind::kDehaze;
}

Synthesized ingest_paired_restoration(const std::filesystem::path& clean, const std::filesystem::path& degraded,
                                      RestorationKind kind) {
  ImageBuf target = raster::to_rgb(raster::read_image(clean));
  ImageBuf input = raster::to_rgb(raster::read_image(degraded));
  if (!target.same_shape(input)) {
    fail(ErrorCode::kDimensionMismatch, "paired images differ in size: " + clean.string() + " vs " +
                                            degraded.string());
  }
  return Synthesized{TaskKind::kDerainDehaze, std::move(input), std::move(target), ExternalPairParams{kind}};
}

Synthesized synth_reconstruction(const ImageBuf& img) {
  return paired(TaskKind::kReconstruction, img);
}

namespace {

const ImageBuf& need_image(const SynthInputs& in) {
  if (in.image == nullptr) fail(ErrorCode::kDegenerateParam, "synthesizer needs a source image");
  return *in.image;
}

const AnnotationSet& need_annotations(const SynthInputs& in) {
  if (in.annotations == nullptr) fail(ErrorCode::kDegenerateParam, "synthesizer needs annotations");
  return *in.annotations;
}

const raster::FloatMap& need_depth(const SynthInputs& in) {
  if (in.depth == nullptr) fail(ErrorCode::kDegenerateParam, "synthesizer needs a depth map");
  return *in.depth;
}

}  // namespace

Synthesized synthesize(TaskKind task, const SynthInputs& in, Rng64& rng, const SynthConfig& cfg) {
  switch (task) {
    case TaskKind::kSemanticSeg: return synth_semantic_seg(need_image(in), need_annotations(in));
    case TaskKind::kInstanceSeg: return synth_instance_seg(need_image(in), need_annotations(in));
    case TaskKind::kPanopticSeg: return synth_panoptic_seg(need_image(in), need_annotations(in));
    case TaskKind::kDetection: return synth_detection(need_image(in), need_annotations(in), cfg.box_thickness);
    case TaskKind::kDepth: return synth_depth(need_image(in), need_depth(in));
    case TaskKind::kInpainting: return synth_inpainting(need_image(in), rng, cfg.inpaint);
    case TaskKind::kEdge: return synth_edge(need_image(in), cfg.edge);
    case TaskKind::kIsr: return synth_isr(need_image(in), rng, cfg.isr);
    case TaskKind::kDeblur: return synth_deblur(need_image(in), rng, cfg.deblur);
    case TaskKind::kLowLight: return synth_lowlight(need_image(in), rng, cfg.lowlight);
    case TaskKind::kDenoise: return synth_denoise(need_image(in), rng, cfg.denoise);
    case TaskKind::kReconstruction: return synth_reconstruction(need_image(in));
    case TaskKind::kDerainDehaze: break;
  }
  fail(ErrorCode::kDegenerateParam, "derain_dehaze pairs are ingested, not synthesized");
}

Synthesized replay_from_params(TaskKind task, const SynthInputs& in, const DegradationParams& params,
                               const SynthConfig& cfg) {
  auto expect = [&]<typename T>(const T*) -> const T& {
    const T* p = std::get_if<T>(&params);
    if (p == nullptr) fail(ErrorCode::kInvalidConfig, "recorded params do not match task " + std::string(task_name(task)));
    return *p;
  };
  switch (task) {
    case TaskKind::kEdge: {
      const auto& p = expect(static_cast<const EdgeParams*>(nullptr));
      return synth_edge(need_image(in), EdgeConfig{p.low, p.high});
    }
    case TaskKind::kInpainting: {
      const auto& p = expect(static_cast<const InpaintParams*>(nullptr));
      return restoration(task, need_image(in), apply_inpaint(need_image(in), p), p);
    }
    case TaskKind::kIsr: {
      const auto& p = expect(static_cast<const IsrParams*>(nullptr));
      return restoration(task, need_image(in), apply_isr(need_image(in), p), p);
    }
    case TaskKind::kDeblur: {
      const auto& p = expect(static_cast<const DeblurParams*>(nullptr));
      return restoration(task, need_image(in), apply_deblur(need_image(in), p), p);
    }
    case TaskKind::kLowLight: {
      const auto& p = expect(static_cast<const LowLightParams*>(nullptr));
      return restoration(task, need_image(in), apply_lowlight(need_image(in), p), p);
    }
    case TaskKind::kDenoise: {
      const auto& p = expect(static_cast<const DenoiseParams*>(nullptr));
      return restoration(task, need_image(in), apply_denoise(need_image(in), p), p);
    }
    default: {
      // Knob-free tasks are pure functions of their inputs.
      Rng64 unused(0);
      return synthesize(task, in, unused, cfg);
    }
  }
}

}  // namespace proxyforge::proxytasks
