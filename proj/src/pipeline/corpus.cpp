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

#include "proxyforge/pipeline/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include <fmt/format.h>
#include <json.hpp>

#include "proxyforge/error.hpp"
#include "proxyforge/raster/rng.hpp"

namespace proxyforge::pipeline {
namespace {

bool is_image_file(const std::filesystem::path& p) {
  auto ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

}  // namespace

std::string file_stem(const std::string& id) {
  std::string out;
  bool changed = id.empty();
  for (unsigned char c : id) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.') {
      out += static_cast<char>(c);
    } else {
      out += '_';
      changed = true;
    }
  }
  if (!out.empty() && out.front() == '.') {
    out.front() = '_';
    changed = true;
  }
  if (changed) out += fmt::format("-{:08x}", static_cast<std::uint32_t>(raster::fnv1a64(id)));
  return out;
}

std::filesystem::path depth_path(const std::filesystem::path& dir, const CorpusImage& img) {
  if (dir.empty()) return {};
  std::vector<std::string> stems{file_stem(img.id)};
  if (!img.path.empty() && img.path.stem().string() != stems[0]) stems.push_back(img.path.stem().string());
  for (const auto& stem : stems) {
    for (const char* ext : {".sgtd", ".png"}) {
      auto p = dir / (stem + ext);
      if (std::filesystem::exists(p)) return p;
    }
  }
  return {};
}

std::vector<RestorationPair> read_restoration_pairs(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) fail(ErrorCode::kMissingFile, "no such file: " + path.string());
  std::ifstream in(path);
  std::vector<RestorationPair> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) fail(ErrorCode::kInvalidConfig, "malformed line in " + path.string());
    try {
      RestorationPair p;
      p.id = j.at("id").get<std::string>();
      p.clean = path.parent_path() / j.at("clean").get<std::string>();
      p.degraded = path.parent_path() / j.at("degraded").get<std::string>();
      const auto kind = j.at("kind").get<std::string>();
      if (kind == "derain") p.kind = proxytasks::RestorationKind::kDerain;
      else if (kind == "dehaze") p.kind = proxytasks::RestorationKind::kDehaze;
      else fail(ErrorCode::kInvalidConfig, "restoration kind must be derain or dehaze, got " + kind);
      out.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::kInvalidConfig, "bad restoration pair in " + path.string() + ": " + e.what());
    }
  }
  return out;
}

Corpus load_corpus(const PipelineConfig& cfg) {
  Corpus c;
  const auto images_dir = cfg.resolve(cfg.io.images);
  if (!cfg.io.annotations.empty()) {
    c.coco = annotations::CocoDocument::load(cfg.resolve(cfg.io.annotations));
    for (const auto& info : c.coco->images()) c.images.push_back({info.id, images_dir / info.file_name});
  } else {
    if (images_dir.empty() || !std::filesystem::is_directory(images_dir)) {
      fail(ErrorCode::kMissingFile, "image directory not found: " + images_dir.string());
    }
    for (const auto& e : std::filesystem::directory_iterator(images_dir))
      if (e.is_regular_file() && is_image_file(e.path())) c.images.push_back({e.path().stem().string(), e.path()});
  }
  std::sort(c.images.begin(), c.images.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < c.images.size(); ++i)
    if (c.images[i].id == c.images[i - 1].id) fail(ErrorCode::kInvalidConfig, "duplicate image id " + c.images[i].id);
  if (!cfg.io.restoration_pairs.empty()) c.restoration = read_restoration_pairs(cfg.resolve(cfg.io.restoration_pairs));
  c.depth_primary = cfg.resolve(cfg.io.depth_primary);
  c.depth_secondary = cfg.resolve(cfg.io.depth_secondary);
  return c;
}

std::vector<std::size_t> corpus_order(const Corpus& corpus, std::uint64_t seed) {
  std::vector<std::size_t> order(corpus.images.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  raster::Rng64 rng(raster::derive_seed(seed, "corpus", 0));
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  return order;
}

}  // namespace proxyforge::pipeline
