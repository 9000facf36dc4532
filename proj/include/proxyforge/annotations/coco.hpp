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
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "proxyforge/annotations/mask.hpp"

namespace proxyforge::annotations {

struct Category {
  int id = 0;  // > 0; 0 is reserved for background
  std::string name;
  bool is_thing = true;

  friend bool operator==(const Category&, const Category&) = default;
};

struct Box {
  double x = 0, y = 0, w = 0, h = 0;
  friend bool operator==(const Box&, const Box&) = default;
};

struct InstanceAnnotation {
  std::int64_t instance_id = 0;
  int category_id = 0;
  Box bbox;  // clamped to the image frame
  BinaryMask mask;

  friend bool operator==(const InstanceAnnotation&, const InstanceAnnotation&) = default;
};

struct AnnotationSet {
  std::string image_id;
  int width = 0;
  int height = 0;
  std::vector<Category> categories;
  std::vector<InstanceAnnotation> instances;  // file order
  // Instances whose segmentation rasterized to no pixels; not kept.
  std::size_t dropped_empty = 0;

  const Category* find_category(int id) const noexcept;

  friend bool operator==(const AnnotationSet&, const AnnotationSet&) = default;
};

struct ImageInfo {
  std::string id;
  std::string file_name;
  int width = 0;
  int height = 0;
};

// A parsed COCO-style annotation document. Decoding of a given image's masks
// happens lazily in annotations_for().
class CocoDocument {
 public:
  static CocoDocument load(const std::filesystem::path& file);
  static CocoDocument parse(std::string_view json_text);

  const std::vector<ImageInfo>& images() const noexcept { return images_; }
  const std::vector<Category>& categories() const noexcept { return categories_; }
  bool has_image(std::string_view image_id) const;

  // Throws UnknownImage, MalformedAnnotation, MaskShapeMismatch.
  AnnotationSet annotations_for(std::string_view image_id) const;

 private:
  struct RawAnnotation {
    std::int64_t id = 0;
    int category_id = 0;
    bool has_bbox = false;
    Box bbox;
    // Either polygons or an uncompressed RLE.
    std::vector<std::vector<Point>> polygons;
    bool is_rle = false;
    std::vector<std::uint64_t> rle_counts;
    int rle_height = 0;
    int rle_width = 0;
  };

  std::vector<ImageInfo> images_;
  std::map<std::string, std::size_t, std::less<>> image_index_;
  std::vector<Category> categories_;
  std::map<std::string, std::vector<RawAnnotation>, std::less<>> by_image_;
};

AnnotationSet parse_annotations(const std::filesystem::path& file, std::string_view image_id);

}  // namespace proxyforge::annotations
