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

#include "proxyforge/proxytasks/params.hpp"

#include <string>

#include "proxyforge/error.hpp"

namespace proxyforge::proxytasks {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

NoiseKind noise_kind_from(std::string_view name) {
  for (NoiseKind k : {NoiseKind::kGaussian, NoiseKind::kJpeg, NoiseKind::kSaltPepper, NoiseKind::kPoisson})
    if (noise_kind_name(k) == name) return k;
  fail(ErrorCode::kInvalidConfig, "unknown noise op '" + std::string(name) + "'");
}

RestorationKind restoration_kind_from(std::string_view name) {
  if (name == "derain") return RestorationKind::kDerain;
  if (name == "dehaze") return RestorationKind::kDehaze;
  fail(ErrorCode::kInvalidConfig, "unknown restoration kind '" + std::string(name) + "'");
}

}  // namespace

std::string_view noise_kind_name(NoiseKind kind) noexcept {
  switch (kind) {
    case NoiseKind::kGaussian: return "gaussian";
    case NoiseKind::kJpeg: return "jpeg";
    case NoiseKind::kSaltPepper: return "salt_pepper";
    case NoiseKind::kPoisson: return "poisson";
  }
  return "gaussian";
}

std::string_view restoration_kind_name(RestorationKind kind) noexcept {
  return kind == RestorationKind::kDerain ? "derain" : "dehaze";
}

Json params_to_json(const DegradationParams& params) {
  return std::visit(
      Overloaded{
          [](const NoParams&) { return Json::object(); },
          [](const EdgeParams& p) {
            return Json{{"low", p.low}, {"high", p.high}, {"blur_size", p.blur_size}, {"blur_sigma", p.blur_sigma}};
          },
          [](const DepthParams& p) { return Json{{"depth_min", p.depth_min}, {"depth_max", p.depth_max}}; },
          [](const InpaintParams& p) {
            Json j{{"mode", p.mode == InpaintMode::kLines ? "lines" : "blocks"}, {"fill", p.fill}};
            Json shapes = Json::array();
            for (const auto& s : p.strokes)
              shapes.push_back({{"x0", s.x0}, {"y0", s.y0}, {"x1", s.x1}, {"y1", s.y1}, {"thickness", s.thickness}});
            for (const auto& b : p.blocks) shapes.push_back({{"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h}});
            j["mask_spec"] = std::move(shapes);
            j["occupancy"] = p.occupancy;
            return j;
          },
          [](const IsrParams& p) {
            return Json{{"sr_factor", p.factor}, {"low_width", p.low_width}, {"low_height", p.low_height}};
          },
          [](const DeblurParams& p) { return Json{{"blur_len", p.length}, {"blur_angle_deg", p.angle_deg}}; },
          [](const LowLightParams& p) {
            return Json{{"brightness_scale", p.brightness_scale},
                        {"noise_intensity", p.noise_intensity},
                        {"noise_seed", p.noise_seed}};
          },
          [](const DenoiseParams& p) {
            Json ops = Json::array();
            for (const auto& op : p.ops) {
              Json o{{"op", noise_kind_name(op.kind)}};
              switch (op.kind) {
                case NoiseKind::kGaussian: o["noise_sigma"] = op.value; break;
                case NoiseKind::kJpeg: o["quality"] = static_cast<int>(op.value); break;
                case NoiseKind::kSaltPepper: o["amount"] = op.value; break;
                case NoiseKind::kPoisson: break;
              }
              o["seed"] = op.seed;
              ops.push_back(std::move(o));
            }
            return Json{{"applied_noise_ops", std::move(ops)}};
          },
          [](const ExternalPairParams& p) { return Json{{"source", restoration_kind_name(p.kind)}}; },
      },
      params);
}

DegradationParams params_from_json(TaskKind task, const Json& j) {
  try {
    switch (task) {
      case TaskKind::kSemanticSeg:
      case TaskKind::kInstanceSeg:
      case TaskKind::kPanopticSeg:
      case TaskKind::kDetection:
      case TaskKind::kReconstruction:
        return NoParams{};
      case TaskKind::kEdge:
        return EdgeParams{j.at("low").get<double>(), j.at("high").get<double>(), j.at("blur_size").get<int>(),
                          j.at("blur_sigma").get<double>()};
      case TaskKind::kDepth:
        return DepthParams{j.at("depth_min").get<double>(), j.at("depth_max").get<double>()};
      case TaskKind::kInpainting: {
        InpaintParams p;
        p.mode = j.at("mode").get<std::string>() == "lines" ? InpaintMode::kLines : InpaintMode::kBlocks;
        p.fill = j.at("fill").get<std::uint8_t>();
        for (const Json& s : j.at("mask_spec")) {
          if (s.contains("thickness")) {
            p.strokes.push_back({s.at("x0").get<double>(), s.at("y0").get<double>(), s.at("x1").get<double>(),
                                 s.at("y1").get<double>(), s.at("thickness").get<double>()});
          } else {
            p.blocks.push_back({s.at("x").get<int>(), s.at("y").get<int>(), s.at("w").get<int>(), s.at("h").get<int>()});
          }
        }
        p.occupancy = j.at("occupancy").get<double>();
        return p;
      }
      case TaskKind::kIsr:
        return IsrParams{j.at("sr_factor").get<int>(), j.at("low_width").get<int>(), j.at("low_height").get<int>()};
      case TaskKind::kDeblur:
        return DeblurParams{j.at("blur_len").get<int>(), j.at("blur_angle_deg").get<double>()};
      case TaskKind::kLowLight:
        return LowLightParams{j.at("brightness_scale").get<double>(), j.at("noise_intensity").get<double>(),
                              j.at("noise_seed").get<std::uint64_t>()};
      case TaskKind::kDenoise: {
        DenoiseParams p;
        for (const Json& o : j.at("applied_noise_ops")) {
          NoiseOp op;
          op.kind = noise_kind_from(o.at("op").get<std::string>());
          switch (op.kind) {
            case NoiseKind::kGaussian: op.value = o.at("noise_sigma").get<double>(); break;
            case NoiseKind::kJpeg: op.value = o.at("quality").get<int>(); break;
            case NoiseKind::kSaltPepper: op.value = o.at("amount").get<double>(); break;
            case NoiseKind::kPoisson: break;
          }
          op.seed = o.at("seed").get<std::uint64_t>();
          p.ops.push_back(op);
        }
        return p;
      }
      case TaskKind::kDerainDehaze:
        return ExternalPairParams{restoration_kind_from(j.at("source").get<std::string>())};
    }
  } catch (const Json::exception& e) {
    fail(ErrorCode::kInvalidConfig, std::string("bad params record: ") + e.what());
  }
  return NoParams{};
}

}  // namespace proxyforge::proxytasks
