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

#include "proxyforge/annotations/coco.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "proxyforge/error.hpp"

namespace proxyforge::annotations {
namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string& what) { fail(ErrorCode::kMalformedAnnotation, what); }

const json& require(const json& obj, const char* key, const char* context) {
  auto it = obj.find(key);
  if (it == obj.end()) malformed(std::string(context) + " is missing '" + key + "'");
  return *it;
}

std::string id_text(const json& v) {
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_string()) return v.get<std::string>();
  malformed("image id must be an integer or string");
}

int as_int(const json& v, const char* what) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) malformed(std::string(what) + " must be an integer");
  return v.get<int>();
}

double as_double(const json& v, const char* what) {
  if (!v.is_number()) malformed(std::string(what) + " must be a number");
  return v.get<double>();
}

}  // namespace

const Category* AnnotationSet::find_category(int id) const noexcept {
  auto it = std::find_if(categories.begin(), categories.end(), [id](const Category& c) { return c.id == id; });
  return it == categories.end() ? nullptr : &*it;
}

CocoDocument CocoDocument::load(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    if (!std::filesystem::exists(file)) fail(ErrorCode::kMissingFile, file.string());
    fail(ErrorCode::kIoFailure, "cannot read " + file.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

CocoDocument CocoDocument::parse(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    malformed(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) malformed("top level must be an object");

  CocoDocument out;
  try {
    for (const json& img : require(doc, "images", "document")) {
      ImageInfo info;
      info.id = id_text(require(img, "id", "image"));
      info.width = as_int(require(img, "width", "image"), "image width");
      info.height = as_int(require(img, "height", "image"), "image height");
      if (info.width < 1 || info.height < 1) malformed("image " + info.id + " has empty dimensions");
      if (auto it = img.find("file_name"); it != img.end() && it->is_string()) info.file_name = it->get<std::string>();
      if (!out.image_index_.emplace(info.id, out.images_.size()).second) malformed("duplicate image id " + info.id);
      out.images_.push_back(std::move(info));
    }

    std::set<int> category_ids;
    for (const json& cat : require(doc, "categories", "document")) {
      Category c;
      c.id = as_int(require(cat, "id", "category"), "category id");
      if (c.id <= 0) malformed("category id must be positive (0 is background)");
      const json& name = require(cat, "name", "category");
      if (!name.is_string()) malformed("category name must be a string");
      c.name = name.get<std::string>();
      if (auto it = cat.find("isthing"); it != cat.end()) {
        if (it->is_boolean()) c.is_thing = it->get<bool>();
        else c.is_thing = as_int(*it, "isthing") != 0;
      }
      if (!category_ids.insert(c.id).second) malformed("duplicate category id " + std::to_string(c.id));
      out.categories_.push_back(std::move(c));
    }

    for (const json& ann : require(doc, "annotations", "document")) {
      RawAnnotation raw;
      raw.id = require(ann, "id", "annotation").get<std::int64_t>();
      const std::string image = id_text(require(ann, "image_id", "annotation"));
      raw.category_id = as_int(require(ann, "category_id", "annotation"), "category_id");
      if (!category_ids.contains(raw.category_id)) {
        malformed("annotation " + std::to_string(raw.id) + " references unknown category " +
                  std::to_string(raw.category_id));
      }
      if (auto it = ann.find("bbox"); it != ann.end()) {
        if (!it->is_array() || it->size() != 4) malformed("bbox must have 4 numbers");
        raw.has_bbox = true;
        raw.bbox = {as_double((*it)[0], "bbox"), as_double((*it)[1], "bbox"), as_double((*it)[2], "bbox"),
                    as_double((*it)[3], "bbox")};
      }
      const json& seg = require(ann, "segmentation", "annotation");
      if (seg.is_array()) {
        for (const json& poly : seg) {
          if (!poly.is_array() || poly.size() % 2 != 0) malformed("polygon must be a flat list of x,y pairs");
          std::vector<Point> pts;
          for (std::size_t i = 0; i < poly.size(); i += 2) {
            pts.push_back({as_double(poly[i], "polygon"), as_double(poly[i + 1], "polygon")});
          }
          raw.polygons.push_back(std::move(pts));
        }
      } else if (seg.is_object()) {
        const json& counts = require(seg, "counts", "RLE segmentation");
        if (counts.is_string()) malformed("compressed RLE is not supported; convert to uncompressed counts");
        if (!counts.is_array()) malformed("RLE counts must be a list");
        const json& size = require(seg, "size", "RLE segmentation");
        if (!size.is_array() || size.size() != 2) malformed("RLE size must be [height, width]");
        raw.is_rle = true;
        raw.rle_height = as_int(size[0], "RLE size");
        raw.rle_width = as_int(size[1], "RLE size");
        for (const json& c : counts) {
          if (!c.is_number_unsigned() && !(c.is_number_integer() && c.get<std::int64_t>() >= 0)) {
            malformed("RLE counts must be nonnegative integers");
          }
          raw.rle_counts.push_back(c.get<std::uint64_t>());
        }
      } else {
        malformed("segmentation must be a polygon list or an RLE object");
      }
      out.by_image_[image].push_back(std::move(raw));
    }
  } catch (const json::exception& e) {
    malformed(std::string("unexpected field type: ") + e.what());
  }
  return out;
}

bool CocoDocument::has_image(std::string_view image_id) const {
  return image_index_.find(image_id) != image_index_.end();
}

AnnotationSet CocoDocument::annotations_for(std::string_view image_id) const {
  auto idx = image_index_.find(image_id);
  if (idx == image_index_.end()) fail(ErrorCode::kUnknownImage, std::string(image_id));
  const ImageInfo& info = images_[idx->second];

  AnnotationSet set;
  set.image_id = info.id;
  set.width = info.width;
  set.height = info.height;
  set.categories = categories_;

  auto raws = by_image_.find(image_id);
  if (raws == by_image_.end()) return set;

  std::set<std::int64_t> seen_ids;
  for (const RawAnnotation& raw : raws->second) {
    if (!seen_ids.insert(raw.id).second) malformed("duplicate annotation id " + std::to_string(raw.id));
    InstanceAnnotation inst;
    inst.instance_id = raw.id;
    inst.category_id = raw.category_id;
    if (raw.is_rle) {
      if (raw.rle_height != info.height || raw.rle_width != info.width) {
        fail(ErrorCode::kMaskShapeMismatch,
             "annotation " + std::to_string(raw.id) + " RLE size " + std::to_string(raw.rle_height) + "x" +
                 std::to_string(raw.rle_width) + " != image " + std::to_string(info.height) + "x" +
                 std::to_string(info.width));
      }
      try {
        inst.mask = decode_rle(raw.rle_counts, info.width, info.height);
      } catch (const Error& e) {
        malformed("annotation " + std::to_string(raw.id) + ": " + e.what());
      }
    } else {
      inst.mask = BinaryMask(info.width, info.height);
      for (const auto& poly : raw.polygons) {
        try {
          inst.mask.merge(rasterize_polygon(poly, info.width, info.height));
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kDegeneratePolygon) throw;
        }
      }
    }
    if (inst.mask.empty()) {
      ++set.dropped_empty;
      continue;
    }

    Box b = raw.bbox;
    if (!raw.has_bbox) {
      int x0 = info.width, y0 = info.height, x1 = -1, y1 = -1;
      for (int r = 0; r < info.height; ++r)
        for (int c = 0; c < info.width; ++c)
          if (inst.mask.get(r, c)) {
            x0 = std::min(x0, c); x1 = std::max(x1, c);
            y0 = std::min(y0, r); y1 = std::max(y1, r);
          }
      b = {double(x0), double(y0), double(x1 - x0 + 1), double(y1 - y0 + 1)};
    }
    const double bx0 = std::clamp(b.x, 0.0, double(info.width));
    const double by0 = std::clamp(b.y, 0.0, double(info.height));
    const double bx1 = std::clamp(b.x + b.w, 0.0, double(info.width));
    const double by1 = std::clamp(b.y + b.h, 0.0, double(info.height));
    inst.bbox = {bx0, by0, std::max(0.0, bx1 - bx0), std::max(0.0, by1 - by0)};
    set.instances.push_back(std::move(inst));
  }
  return set;
}

AnnotationSet parse_annotations(const std::filesystem::path& file, std::string_view image_id) {
  return CocoDocument::load(file).annotations_for(image_id);
}

}  // namespace proxyforge::annotations
