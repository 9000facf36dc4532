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
#include <string>
#include <vector>

#include "proxyforge/annotations/coco.hpp"
#include "proxyforge/pipeline/config.hpp"
#include "proxyforge/proxytasks/params.hpp"

namespace proxyforge::pipeline {

struct CorpusImage {
  std::string id;
  std::filesystem::path path;
};

struct RestorationPair {
  std::string id;
  std::filesystem::path clean;
  std::filesystem::path degraded;
  proxytasks::RestorationKind kind = proxytasks::RestorationKind::kDerain;
};

struct Corpus {
  std::vector<CorpusImage> images;  // sorted by id
  std::optional<annotations::CocoDocument> coco;
  std::vector<RestorationPair> restoration;  // file order
  std::filesystem::path depth_primary;
  std::filesystem::path depth_secondary;
};

// Images come from the annotation file when one is configured, otherwise from
// a listing of the image directory (png, jpg, jpeg; id = file stem).
Corpus load_corpus(const PipelineConfig& cfg);

// Seeded permutation of the corpus; every task draws its images as a prefix.
std::vector<std::size_t> corpus_order(const Corpus& corpus, std::uint64_t seed);

// File-system-safe stem for an id. Ids that needed escaping get a hash suffix
// so distinct ids never collide.
std::string file_stem(const std::string& id);

// Depth map for an image in `dir`, looked up by id and then by the image file
// stem (.sgtd preferred over .png). Empty when absent.
std::filesystem::path depth_path(const std::filesystem::path& dir, const CorpusImage& img);

std::vector<RestorationPair> read_restoration_pairs(const std::filesystem::path& path);

}  // namespace proxyforge::pipeline
