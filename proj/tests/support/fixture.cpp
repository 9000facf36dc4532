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

#include "fixture.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include <fmt/format.h>
#include <json.hpp>

#include "proxyforge/analysis/tensor_dump.hpp"
#include "proxyforge/annotations/mask.hpp"
#include "proxyforge/pipeline/config.hpp"
#include "proxyforge/pipeline/corpus.hpp"
#include "proxyforge/raster/image_io.hpp"
#include "proxyforge/raster/rng.hpp"

namespace proxyforge::fixture {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;
using annotations::BinaryMask;
using annotations::Point;
using raster::ImageBuf;
using raster::Rgb;
using raster::Rng64;

struct Shape {
  int category = 0;
  std::vector<Point> polygon;
  bool as_rle = false;
  float depth = 0.0f;
  Rgb color{};
};

std::vector<Point> rect(double x, double y, double w, double h) {
  return {{x, y}, {x + w, y}, {x + w, y + h}, {x, y + h}};
}

std::vector<Point> disc(double cx, double cy, double r) {
  std::vector<Point> p;
  for (int k = 0; k < 16; ++k) {
    const double t = 2 * std::numbers::pi * k / 16;
    p.push_back({cx + r * std::cos(t), cy + r * std::sin(t)});
  }
  return p;
}

std::vector<Point> triangle(double x, double y, double w, double h) {
  return {{x + w / 2, y}, {x + w, y + h}, {x, y + h}};
}

void paint(ImageBuf& img, const BinaryMask& m, Rgb c, Rng64& rng) {
  for (int r = 0; r < m.height(); ++r)
    for (int col = 0; col < m.width(); ++col)
      if (m.get(r, col)) {
        const int jitter = static_cast<int>(rng.below(9)) - 4;
        img.set_rgb(col, r, {raster::quantize(c[0] + jitter), raster::quantize(c[1] + jitter), raster::quantize(c[2] + jitter)});
      }
}

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << s;
}

Json polygon_json(const std::vector<Point>& poly) {
  Json flat = Json::array();
  for (const auto& pt : poly) {
    flat.push_back(pt.x);
    flat.push_back(pt.y);
  }
  return Json::array({flat});
}

}  // namespace

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("proxyforge_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

ImageBuf step_edge_image(int width, int height, int edge) {
  ImageBuf img(width, height, 3);
  for (int y = 0; y < height; ++y)
    for (int x = edge; x < width; ++x) img.set_rgb(x, y, {255, 255, 255});
  return img;
}

ImageBuf reference_image(int width, int height) {
  ImageBuf img(width, height, 3);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double base = 128 + 60 * std::sin(x * 0.15) * std::cos(y * 0.11);
      const double fine = ((x / 2 + y / 2) % 2) ? 40.0 : -40.0;
      img.set_rgb(x, y, {raster::quantize(base + fine), raster::quantize(base * 0.8 + fine / 2),
                         raster::quantize(255 - base)});
    }
  }
  return img;
}

FixturePaths write_fixture(const fs::path& root, const FixtureOptions& opt) {
  FixturePaths paths;
  paths.root = root;
  for (const char* d : {"images", "depth_primary", "depth_secondary", "restoration"}) fs::create_directories(root / d);
  const int w = opt.width, h = opt.height;

  std::vector<std::string> ids;
  for (int i = 0; i < opt.images; ++i) ids.push_back(fmt::format("img_{:04d}", i));

  // Which ids the pipeline will try first for depth at the fixture seed.
  // Corpus ids are the COCO image ids, sorted as strings.
  pipeline::Corpus probe;
  for (int i = 0; i < opt.images; ++i) probe.images.push_back({std::to_string(i + 1), {}});
  std::sort(probe.images.begin(), probe.images.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  const auto order = pipeline::corpus_order(probe, opt.corpus_seed);
  for (int k = 0; k < opt.inconsistent_depth && k < opt.images; ++k)
    paths.inconsistent_ids.push_back(ids[std::stoi(probe.images[order[k]].id) - 1]);

  Json coco;
  coco["images"] = Json::array();
  coco["annotations"] = Json::array();
  coco["categories"] = Json::array({
      {{"id", 1}, {"name", "sky"}, {"isthing", 0}},
      {{"id", 2}, {"name", "ground"}, {"isthing", 0}},
      {{"id", 3}, {"name", "box"}, {"isthing", 1}},
      {{"id", 4}, {"name", "ball"}, {"isthing", 1}},
      {{"id", 5}, {"name", "tent"}, {"isthing", 1}},
      {{"id", 6}, {"name", "kite"}, {"isthing", 1}},
  });
  const Rgb category_color[7] = {{0, 0, 0}, {120, 170, 230}, {110, 140, 70}, {200, 60, 40},
                                 {240, 200, 40}, {150, 80, 170}, {30, 200, 190}};

  std::int64_t ann_id = 1;
  for (int i = 0; i < opt.images; ++i) {
    const std::string& id = ids[i];
    Rng64 rng(raster::derive_seed(0xF1C7u, id, 0));
    const int horizon = static_cast<int>(h * rng.uniform(0.3, 0.55));
    std::vector<Shape> shapes;
    shapes.push_back({1, rect(0, 0, w, horizon), false, 1.0f, category_color[1]});
    shapes.push_back({2, rect(0, horizon, w, h - horizon), false, 0.6f, category_color[2]});
    const int things = 1 + static_cast<int>(rng.below(4));
    for (int t = 0; t < things; ++t) {
      const int cat = 3 + static_cast<int>(rng.below(4));
      const double sw = w * rng.uniform(0.15, 0.4), sh = h * rng.uniform(0.15, 0.4);
      const double sx = rng.uniform(0, w - sw), sy = rng.uniform(0, h - sh);
      std::vector<Point> poly = cat == 4 ? disc(sx + sw / 2, sy + sh / 2, std::min(sw, sh) / 2)
                                : cat == 5 ? triangle(sx, sy, sw, sh)
                                           : rect(sx, sy, sw, sh);
      const float depth = static_cast<float>(0.1 + 0.4 * (sy + sh) / h * rng.uniform(0.5, 1.0));
      shapes.push_back({cat, std::move(poly), rng.bernoulli(0.3), depth, category_color[cat]});
    }

    ImageBuf img(w, h, 3);
    raster::FloatMap depth{w, h, std::vector<float>(static_cast<std::size_t>(w) * h, 0.0f)};
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) depth.data[static_cast<std::size_t>(y) * w + x] = 10.0f - 8.0f * y / h;

    coco["images"].push_back({{"id", i + 1}, {"file_name", id + ".png"}, {"width", w}, {"height", h}});
    for (const auto& s : shapes) {
      const BinaryMask m = annotations::rasterize_polygon(s.polygon, w, h);
      paint(img, m, s.color, rng);
      if (s.category >= 3) {
        for (int y = 0; y < h; ++y)
          for (int x = 0; x < w; ++x)
            if (m.get(y, x)) depth.data[static_cast<std::size_t>(y) * w + x] = 10.0f * s.depth + 0.5f;
      }
      Json a;
      a["id"] = ann_id++;
      a["image_id"] = i + 1;
      a["category_id"] = s.category;
      if (s.as_rle) {
        a["segmentation"] = {{"size", {h, w}}, {"counts", annotations::encode_rle(m)}};
      } else {
        a["segmentation"] = polygon_json(s.polygon);
      }
      double x0 = w, y0 = h, x1 = 0, y1 = 0;
      for (const auto& p : s.polygon) {
        x0 = std::min(x0, p.x);
        y0 = std::min(y0, p.y);
        x1 = std::max(x1, p.x);
        y1 = std::max(y1, p.y);
      }
      a["bbox"] = {x0, y0, x1 - x0, y1 - y0};
      a["iscrowd"] = s.as_rle ? 1 : 0;
      coco["annotations"].push_back(a);
    }
    raster::write_png(root / "images" / (id + ".png"), img);

    const bool inconsistent = std::find(paths.inconsistent_ids.begin(), paths.inconsistent_ids.end(), id) !=
                              paths.inconsistent_ids.end();
    raster::Gray16 second{w, h, std::vector<std::uint16_t>(static_cast<std::size_t>(w) * h)};
    if (inconsistent) {
      // Orthogonal steps: the best affine fit is a constant and leaves a
      // mean absolute residual of 0.5.
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          depth.data[static_cast<std::size_t>(y) * w + x] = x < w / 2 ? 2.0f : 9.0f;
          second.data[static_cast<std::size_t>(y) * w + x] = y < h / 2 ? 1000 : 60000;
        }
      }
    } else {
      for (std::size_t k = 0; k < depth.data.size(); ++k) {
        const double v = 0.35 * depth.data[k] + 0.2 + rng.uniform(-0.01, 0.01);
        second.data[k] = static_cast<std::uint16_t>(std::lround(v * 12000.0));
      }
    }
    analysis::write_tensor_dump(root / "depth_primary" / (id + ".sgtd"),
                                analysis::make_tensor({std::uint64_t(h), std::uint64_t(w)}, depth.data));
    raster::write_png16(root / "depth_secondary" / (id + ".png"), second);
  }
  write_text(root / "annotations.json", coco.dump());

  std::string pairs;
  for (int k = 0; k < opt.restoration_pairs; ++k) {
    const bool rain = k % 2 == 0;
    const std::string id = fmt::format("{}_{:03d}", rain ? "rain" : "haze", k);
    Rng64 rng(raster::derive_seed(0xBEEFu, id, 0));
    ImageBuf clean = reference_image(48, 40);
    for (auto& v : clean.data()) v = raster::quantize(v * rng.uniform(0.7, 1.0));
    ImageBuf degraded = clean;
    if (rain) {
      for (int s = 0; s < 40; ++s) {
        int x = static_cast<int>(rng.below(48)), y = static_cast<int>(rng.below(40));
        for (int t = 0; t < 6 && y + t < 40 && x + t / 3 < 48; ++t) degraded.set_rgb(x + t / 3, y + t, {230, 230, 235});
      }
    } else {
      const double a = rng.uniform(0.3, 0.6);
      for (auto& v : degraded.data()) v = raster::quantize(v * (1 - a) + 220 * a);
    }
    raster::write_png(root / "restoration" / (id + "_clean.png"), clean);
    raster::write_png(root / "restoration" / (id + "_degraded.png"), degraded);
    pairs += Json{{"id", id},
                  {"clean", "restoration/" + id + "_clean.png"},
                  {"degraded", "restoration/" + id + "_degraded.png"},
                  {"kind", rain ? "derain" : "dehaze"}}
                 .dump() +
             "\n";
  }
  write_text(root / "restoration_pairs.jsonl", pairs);

  static const char* kSources[] = {"General", "Doc/Chart/Screen", "Math/Reasoning", "General OCR", "Language"};
  std::string vqa;
  for (int k = 0; k < opt.vqa_refs; ++k) {
    vqa += Json{{"id", fmt::format("vqa_{:05d}", k)},
                {"path", fmt::format("vqa/{:05d}.json", k)},
                {"source", kSources[k % 5]}}
               .dump() +
           "\n";
  }
  write_text(root / "vqa.jsonl", vqa);

  pipeline::PipelineConfig cfg = pipeline::default_config();
  cfg.global_seed = opt.corpus_seed;
  for (auto& t : cfg.tasks)
    t.quota = t.kind == proxytasks::TaskKind::kDerainDehaze ? opt.restoration_quota : opt.quota;
  cfg.io.images = "images";
  cfg.io.annotations = "annotations.json";
  cfg.io.depth_primary = "depth_primary";
  cfg.io.depth_secondary = "depth_secondary";
  cfg.io.restoration_pairs = "restoration_pairs.jsonl";
  cfg.io.vqa = "vqa.jsonl";
  cfg.io.out = "out";
  cfg.scaling_sizes = {60, 300, 1200};
  paths.config = root / "fixture.toml";
  write_text(paths.config, pipeline::config_to_toml(cfg));
  return paths;
}

}  // namespace proxyforge::fixture
