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

#include <doctest.h>

#include "oracles.hpp"
#include "proxyforge/annotations/coco.hpp"
#include "proxyforge/annotations/mask.hpp"
#include "proxyforge/error.hpp"
#include "proxyforge/raster/rng.hpp"

using namespace proxyforge;
using namespace proxyforge::annotations;

namespace {

std::vector<std::uint8_t> bits(const BinaryMask& m) {
  std::vector<std::uint8_t> out;
  for (int r = 0; r < m.height(); ++r)
    for (auto b : m.row(r)) out.push_back(b);
  return out;
}

}  // namespace

TEST_CASE("rle decode on a hand-worked 3x2 example") {
  // column-major: (0,0)=0 (1,0)=1 | (0,1)=1 (1,1)=1 | (0,2)=0 (1,2)=0
  const std::vector<std::uint64_t> counts{1, 3, 2};
  const BinaryMask m = decode_rle(counts, 3, 2);
  CHECK_FALSE(m.get(0, 0));
  CHECK(m.get(1, 0));
  CHECK(m.get(0, 1));
  CHECK(m.get(1, 1));
  CHECK_FALSE(m.get(0, 2));
  CHECK(m.popcount() == 3);
  CHECK(encode_rle(m) == counts);
}

TEST_CASE("rle leading foreground starts with an empty run") {
  BinaryMask m(2, 2);
  m.set(0, 0);
  CHECK(encode_rle(m) == std::vector<std::uint64_t>{0, 1, 3});
}

TEST_CASE("rle length mismatch is rejected") {
  const std::vector<std::uint64_t> counts{1, 2};
  CHECK_THROWS_AS(decode_rle(counts, 2, 2), Error);
  try {
    decode_rle(counts, 2, 2);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kRleLengthMismatch);
  }
}

TEST_CASE("rle agrees with the brute-force decoder on random masks") {
  raster::Rng64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const int w = 1 + static_cast<int>(rng.below(16)), h = 1 + static_cast<int>(rng.below(16));
    std::vector<std::uint8_t> grid(static_cast<std::size_t>(w) * h);
    const double p = rng.uniform();
    for (auto& b : grid) b = rng.bernoulli(p);
    const auto counts = oracle::rle_encode(grid, w, h);
    const BinaryMask m = decode_rle(counts, w, h);
    REQUIRE(bits(m) == grid);
    REQUIRE(encode_rle(m) == counts);
  }
}

TEST_CASE("polygon rasterization uses pixel centers") {
  const std::vector<Point> square{{1, 1}, {3, 1}, {3, 3}, {1, 3}};
  const BinaryMask m = rasterize_polygon(square, 5, 5);
  CHECK(m.popcount() == 4);
  CHECK(m.get(1, 1));
  CHECK(m.get(2, 2));
  CHECK_FALSE(m.get(3, 3));
  CHECK(polygon_area(square) == doctest::Approx(4.0));
}

TEST_CASE("degenerate polygons are rejected") {
  const std::vector<Point> two{{0, 0}, {3, 3}};
  CHECK_THROWS_AS(rasterize_polygon(two, 4, 4), Error);
  const std::vector<Point> line{{0, 0}, {1, 1}, {2, 2}};
  CHECK_THROWS_AS(rasterize_polygon(line, 4, 4), Error);
}

TEST_CASE("polygon rasterization agrees with PNPOLY on random polygons") {
  raster::Rng64 rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    const int w = 1 + static_cast<int>(rng.below(16)), h = 1 + static_cast<int>(rng.below(16));
    const int n = 3 + static_cast<int>(rng.below(6));
    std::vector<Point> poly;
    std::vector<std::pair<double, double>> ref;
    for (int k = 0; k < n; ++k) {
      const double x = rng.uniform(-2, w + 2), y = rng.uniform(-2, h + 2);
      poly.push_back({x, y});
      ref.emplace_back(x, y);
    }
    if (std::abs(polygon_area(poly)) < 1e-9) continue;
    REQUIRE(bits(rasterize_polygon(poly, w, h)) == oracle::polygon_mask(ref, w, h));
  }
}

TEST_CASE("coco document: polygons, rle, stuff flags and unknown ids") {
  const char* text = R"({
    "images": [{"id": 7, "file_name": "a.png", "width": 4, "height": 3}],
    "categories": [{"id": 1, "name": "sky", "isthing": 0}, {"id": 2, "name": "tie"}],
    "annotations": [
      {"id": 10, "image_id": 7, "category_id": 1, "segmentation": {"size": [3, 4], "counts": [0, 1, 2, 1, 2, 1, 2, 1, 2]}},
      {"id": 11, "image_id": 7, "category_id": 2, "segmentation": [[1, 1, 3, 1, 3, 3, 1, 3]], "bbox": [1, 1, 2, 2]},
      {"id": 12, "image_id": 7, "category_id": 2, "segmentation": [[0.1, 0.1, 0.2, 0.1, 0.2, 0.2]]}
    ]
  })";
  const CocoDocument doc = CocoDocument::parse(text);
  REQUIRE(doc.images().size() == 1);
  CHECK(doc.has_image("7"));
  const AnnotationSet set = doc.annotations_for("7");
  CHECK(set.width == 4);
  CHECK(set.height == 3);
  REQUIRE(set.instances.size() == 2);
  CHECK(set.dropped_empty == 1);
  CHECK(set.instances[0].mask.popcount() == 4);  // the top row
  for (int c = 0; c < 4; ++c) CHECK(set.instances[0].mask.get(0, c));
  CHECK(set.instances[1].mask.popcount() == 4);
  CHECK(set.instances[1].bbox == Box{1, 1, 2, 2});
  const Category* sky = set.find_category(1);
  REQUIRE(sky);
  CHECK_FALSE(sky->is_thing);
  CHECK(set.find_category(2)->is_thing);
  CHECK_THROWS_AS(doc.annotations_for("8"), Error);
}

TEST_CASE("coco document: malformed input and mask shape mismatch") {
  CHECK_THROWS_AS(CocoDocument::parse("{not json"), Error);
  const char* wrong_size = R"({
    "images": [{"id": 1, "file_name": "a.png", "width": 4, "height": 3}],
    "categories": [{"id": 1, "name": "x"}],
    "annotations": [{"id": 1, "image_id": 1, "category_id": 1, "segmentation": {"size": [2, 2], "counts": [4]}}]
  })";
  const CocoDocument doc = CocoDocument::parse(wrong_size);
  try {
    doc.annotations_for("1");
    FAIL("expected MaskShapeMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMaskShapeMismatch);
  }
}

TEST_CASE("rle hand examples on 2x2") {
  // Column-major positions: 0=(0,0) 1=(1,0) 2=(0,1) 3=(1,1).
  const std::vector<std::uint64_t> a{1, 2, 1};
  const BinaryMask ma = decode_rle(a, 2, 2);
  CHECK(ma.get(0, 1));
  CHECK(ma.get(1, 0));
  CHECK(ma.popcount() == 2);
  const std::vector<std::uint64_t> b{1, 1, 1, 1};
  const BinaryMask mb = decode_rle(b, 2, 2);
  CHECK(mb.get(1, 0));  // position 1
  CHECK(mb.get(1, 1));  // position 3
  CHECK(mb.popcount() == 2);
}

TEST_CASE("axis-aligned square on 4x4 covers four centers") {
  const std::vector<Point> sq{{0, 0}, {2, 0}, {2, 2}, {0, 2}};
  const BinaryMask m = rasterize_polygon(sq, 4, 4);
  CHECK(m.popcount() == 4);
  std::vector<std::pair<double, double>> ref{{0, 0}, {2, 0}, {2, 2}, {0, 2}};
  CHECK(bits(m) == oracle::polygon_mask(ref, 4, 4));
}
