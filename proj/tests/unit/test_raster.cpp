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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "fixture.hpp"
#include "oracles.hpp"
#include "proxyforge/error.hpp"
#include "proxyforge/raster/draw.hpp"
#include "proxyforge/raster/filter.hpp"
#include "proxyforge/raster/image_io.hpp"
#include "proxyforge/raster/jpeg_artifacts.hpp"
#include "proxyforge/raster/noise.hpp"
#include "proxyforge/raster/palette.hpp"
#include "proxyforge/raster/rng.hpp"

using namespace proxyforge;
using namespace proxyforge::raster;

TEST_CASE("splitmix64 matches the published reference stream") {
  Rng64 rng(0);
  CHECK(rng.next_u64() == 0xE220A8397B1DCDAFULL);
  CHECK(rng.next_u64() == 0x6E789E6AA1B965F4ULL);
  CHECK(rng.next_u64() == 0x06C45D188009454FULL);
}

TEST_CASE("fnv1a64 known vectors") {
  CHECK(fnv1a64("") == 0xCBF29CE484222325ULL);
  CHECK(fnv1a64("a") == 0xAF63DC4C8601EC8CULL);
  CHECK(fnv1a64("foobar") == 0x85944171F73967E8ULL);
}

TEST_CASE("derive_seed separates ids and tasks") {
  CHECK(derive_seed(42, "img_1", 1) != derive_seed(42, "img_1", 2));
  CHECK(derive_seed(42, "img_1", 1) != derive_seed(42, "img_2", 1));
  CHECK(derive_seed(42, "img_1", 1) != derive_seed(43, "img_1", 1));
  CHECK(derive_seed(42, "img_1", 1) == derive_seed(42, "img_1", 1));
}

TEST_CASE("below and between stay in range and cover it") {
  Rng64 rng(9);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 5000; ++i) {
    const auto v = rng.below(7);
    REQUIRE(v < 7);
    seen.insert(v);
    const auto w = rng.between(-3, 3);
    REQUIRE(w >= -3);
    REQUIRE(w <= 3);
  }
  CHECK(seen.size() == 7);
}

TEST_CASE("normal draws have unit moments") {
  Rng64 rng(1234);
  double s = 0, s2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    s += x;
    s2 += x * x;
  }
  CHECK(std::abs(s / n) < 0.01);
  CHECK(std::abs(s2 / n - 1.0) < 0.02);
}

TEST_CASE("quantize rounds half up and clamps") {
  CHECK(quantize(0.5) == 1);
  CHECK(quantize(1.49) == 1);
  CHECK(quantize(25.5) == 26);
  CHECK(quantize(-3) == 0);
  CHECK(quantize(254.5) == 255);
  CHECK(quantize(1e9) == 255);
  CHECK(quantize(std::nan("")) == 0);
}

TEST_CASE("hsv conversion agrees with the textbook formula") {
  Rng64 rng(5);
  for (int i = 0; i < 2000; ++i) {
    const double h = rng.uniform(), s = rng.uniform(), v = rng.uniform();
    double r, g, b;
    oracle::hsv_to_rgb(h, s, v, r, g, b);
    const Rgb got = hsv_to_rgb8(h, s, v);
    // Allow the oracle's own rounding to land on either side of a .5 boundary.
    CHECK(std::abs(got[0] - r * 255) <= 0.5 + 1e-9);
    CHECK(std::abs(got[1] - g * 255) <= 0.5 + 1e-9);
    CHECK(std::abs(got[2] - b * 255) <= 0.5 + 1e-9);
  }
}

TEST_CASE("palette: first entries follow the golden-ratio hue walk") {
  CHECK(palette_color(0) == Rgb{0, 0, 0});
  for (int i = 1; i <= 5; ++i) {
    double r, g, b;
    const double h = std::fmod(i * 0.61803398875, 1.0);
    oracle::hsv_to_rgb(h, 0.85, 0.95, r, g, b);
    const Rgb c = palette_color(i);
    CHECK(c[0] == static_cast<int>(std::floor(r * 255 + 0.5)));
    CHECK(c[1] == static_cast<int>(std::floor(g * 255 + 0.5)));
    CHECK(c[2] == static_cast<int>(std::floor(b * 255 + 0.5)));
  }
}

TEST_CASE("palette is injective up to the maximum index and invertible") {
  std::set<Rgb> colors;
  for (int i = 0; i <= kPaletteMaxIndex; ++i) {
    const Rgb c = palette_color(i);
    REQUIRE(colors.insert(c).second);
    REQUIRE(palette_index(c) == i);
  }
  CHECK_THROWS_AS(palette_color(kPaletteMaxIndex + 1), Error);
  CHECK_FALSE(palette_index(Rgb{1, 2, 3}).has_value());
}

TEST_CASE("png round trip is lossless and byte-stable") {
  const auto dir = fixture::scratch_dir("png");
  const ImageBuf img = fixture::reference_image(37, 23);
  write_png(dir / "a.png", img);
  write_png(dir / "b.png", img);
  CHECK(read_image(dir / "a.png") == img);
  std::ifstream a(dir / "a.png", std::ios::binary), b(dir / "b.png", std::ios::binary);
  const std::string sa((std::istreambuf_iterator<char>(a)), {}), sb((std::istreambuf_iterator<char>(b)), {});
  CHECK(sa == sb);

  Gray16 g{5, 3, {0, 1, 2, 3, 4, 65535, 1000, 2000, 3000, 4000, 5, 6, 7, 8, 9}};
  write_png16(dir / "g.png", g);
  CHECK(read_png16(dir / "g.png").data == g.data);
  CHECK_THROWS_AS(read_image(dir / "missing.png"), Error);
}

TEST_CASE("gaussian kernel is normalized and symmetric") {
  const Kernel k = gaussian_kernel(5, 1.4);
  CHECK(std::abs(k.sum() - 1.0) < 1e-12);
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 5; ++c) CHECK(k.at(r, c) == doctest::Approx(k.at(4 - r, 4 - c)).epsilon(1e-15));
}

TEST_CASE("convolve with a delta kernel is the identity") {
  const ImageBuf img = fixture::reference_image(20, 11);
  Kernel delta{3, 3, {0, 0, 0, 0, 1, 0, 0, 0, 0}};
  CHECK(convolve(img, delta) == img);
}

TEST_CASE("bilinear resize keeps constants and the identity size") {
  ImageBuf flat(13, 9, 3, 77);
  CHECK(resize_bilinear(flat, 5, 4) == ImageBuf(5, 4, 3, 77));
  const ImageBuf img = fixture::reference_image(16, 12);
  CHECK(resize_bilinear(img, 16, 12) == img);
}

TEST_CASE("canny on a vertical step marks only the boundary columns") {
  const ImageBuf img = fixture::step_edge_image(48, 32, 24);
  const ImageBuf e = canny(img, 100, 200);
  for (int y = 2; y < 30; ++y) {
    int hits = 0;
    for (int x = 0; x < 48; ++x) {
      if (e.at(x, y, 0) == 0) continue;
      ++hits;
      CHECK(x >= 22);
      CHECK(x <= 25);
    }
    CHECK(hits >= 1);
  }
  CHECK(canny(ImageBuf(30, 30, 3, 90)) == ImageBuf(30, 30, 3, 0));
}

TEST_CASE("jpeg quant tables follow IJG scaling") {
  const auto& base = annex_k_luma_table();
  CHECK(base[0] == 16);
  CHECK(annex_k_chroma_table()[0] == 17);
  for (int q : {1, 10, 50, 75, 100}) {
    const int scale = q < 50 ? 5000 / q : 200 - 2 * q;
    const auto t = scaled_quant_table(base, q);
    for (int i = 0; i < 64; ++i) CHECK(t[i] == std::clamp((base[i] * scale + 50) / 100, 1, 255));
  }
}

TEST_CASE("jpeg roundtrip degrades monotonically with quality") {
  const ImageBuf img = fixture::reference_image(64, 48);
  const double hi = psnr(jpeg_roundtrip(img, 95), img);
  const double mid = psnr(jpeg_roundtrip(img, 50), img);
  const double lo = psnr(jpeg_roundtrip(img, 10), img);
  CHECK(hi > mid);
  CHECK(mid > lo);
  CHECK(hi > 30.0);
  CHECK(jpeg_roundtrip(ImageBuf(16, 16, 3, 128), 10) == ImageBuf(16, 16, 3, 128));
}

TEST_CASE("noise generators have the advertised statistics") {
  const ImageBuf flat(200, 200, 3, 128);
  Rng64 rng(77);
  CHECK(add_gaussian_noise(flat, 0.0, rng) == flat);

  const ImageBuf g = add_gaussian_noise(flat, 10.0, rng);
  double s = 0, s2 = 0;
  for (auto v : g.data()) {
    s += v;
    s2 += (v - 128.0) * (v - 128.0);
  }
  const double n = static_cast<double>(g.size());
  CHECK(std::abs(s / n - 128.0) < 0.2);
  CHECK(std::abs(std::sqrt(s2 / n) - 10.0) < 0.2);

  const ImageBuf sp = add_salt_pepper(flat, 0.1, rng);
  std::size_t black = 0, white = 0;
  for (int y = 0; y < 200; ++y)
    for (int x = 0; x < 200; ++x) {
      const Rgb c = sp.rgb(x, y);
      REQUIRE(c[0] == c[1]);
      REQUIRE(c[1] == c[2]);
      black += c[0] == 0;
      white += c[0] == 255;
    }
  CHECK(std::abs(black / 40000.0 - 0.05) < 0.006);
  CHECK(std::abs(white / 40000.0 - 0.05) < 0.006);

  double ps = 0;
  const ImageBuf p = add_poisson_noise(ImageBuf(200, 100, 1, 40), rng);
  for (auto v : p.data()) ps += v;
  CHECK(std::abs(ps / p.size() - 40.0) < 0.2);
}

TEST_CASE("rectangles and labels draw inside the frame") {
  ImageBuf img(20, 20, 3, 0);
  draw_rect(img, BBox{2, 3, 10, 8}, Rgb{255, 0, 0}, 2);
  int red = 0;
  for (int y = 0; y < 20; ++y)
    for (int x = 0; x < 20; ++x) red += img.rgb(x, y) == Rgb{255, 0, 0};
  // 10x8 outer minus 6x4 inner.
  CHECK(red == 80 - 24);
  CHECK_THROWS_AS(draw_rect(img, BBox{0, 0, 5, 5}, Rgb{1, 1, 1}, 0), Error);
  CHECK(label_width("ab") == 1 + 2 * kGlyphCellWidth);
  ImageBuf small(8, 8, 3, 0);
  draw_label(small, 5, 5, "tie", Rgb{0, 0, 200});  // clipped, must not crash
  CHECK(small.rgb(5, 5) == Rgb{0, 0, 200});
}

namespace {

// Reference SplitMix64 written from the published algorithm, separate from
// the library's constexpr version.
std::uint64_t reference_splitmix(std::uint64_t state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

TEST_CASE("derive_seed of the empty id follows the stated formula") {
  // FNV1a64("") is the offset basis, so the argument is not 0.
  CHECK(derive_seed(0, "", 0) == reference_splitmix(0xCBF29CE484222325ULL));
  CHECK(reference_splitmix(0) == 0xE220A8397B1DCDAFULL);
}

TEST_CASE("derive_seed has no collisions over a million sample ids") {
  std::vector<std::uint64_t> seeds;
  seeds.reserve(1000000);
  for (int i = 0; i < 1000000; ++i) seeds.push_back(derive_seed(42, "semantic_seg:" + std::to_string(i), 1));
  std::sort(seeds.begin(), seeds.end());
  CHECK(std::adjacent_find(seeds.begin(), seeds.end()) == seeds.end());
}

TEST_CASE("checkerboard halves to the midpoint") {
  ImageBuf board(4, 4, 1, 0);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) board.at(x, y, 0) = (x + y) % 2 ? 255 : 0;
  const ImageBuf half = resize_bilinear(board, 2, 2);
  for (auto v : half.data()) CHECK((v == 127 || v == 128));
}

TEST_CASE("box filter on an impulse row") {
  ImageBuf row(7, 1, 1, 0);
  row.at(3, 0, 0) = 255;
  const Kernel k{1, 3, {1.0 / 3, 1.0 / 3, 1.0 / 3}};
  const ImageBuf out = convolve(row, k);
  CHECK(out.at(2, 0, 0) == 85);
  CHECK(out.at(3, 0, 0) == 85);
  CHECK(out.at(4, 0, 0) == 85);
  CHECK(out.at(1, 0, 0) == 0);
  CHECK(out.at(5, 0, 0) == 0);
}

TEST_CASE("full-frame box of thickness 3 on 16x16") {
  ImageBuf img(16, 16, 3, 0);
  draw_rect(img, BBox{0, 0, 16, 16}, Rgb{9, 200, 9}, 3);
  int n = 0;
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x < 16; ++x) n += img.rgb(x, y) == Rgb{9, 200, 9};
  CHECK(n == 2 * 3 * (16 + 16) - 4 * 9);
}

TEST_CASE("a three-letter tag spans three glyph cells") {
  CHECK(label_width("cat") == 1 + 3 * 6);
  CHECK(label_height() == 1 + 8);
  ImageBuf img(40, 20, 3, 0);
  draw_label(img, 2, 2, "cat", Rgb{0, 0, 180});
  int tag = 0, ink = 0;
  for (int y = 0; y < 20; ++y)
    for (int x = 0; x < 40; ++x) {
      tag += img.rgb(x, y) == Rgb{0, 0, 180};
      ink += img.rgb(x, y) == Rgb{255, 255, 255};
    }
  CHECK(tag + ink == label_width("cat") * label_height());
  CHECK(ink > 0);
}

TEST_CASE("repeated jpeg at quality 10 changes less the second time") {
  const ImageBuf img = fixture::reference_image(64, 48);
  const ImageBuf once = jpeg_roundtrip(img, 10);
  const ImageBuf twice = jpeg_roundtrip(once, 10);
  std::size_t first = 0, second = 0;
  for (std::size_t i = 0; i < img.size(); ++i) {
    first += img.data()[i] != once.data()[i];
    second += once.data()[i] != twice.data()[i];
  }
  CHECK(second < first);
}

TEST_CASE("jpeg at quality 10 shows block edges on a smooth ramp") {
  ImageBuf ramp(64, 16, 3);
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x < 64; ++x) {
      const auto v = static_cast<std::uint8_t>(40 + x * 2 + y);
      ramp.set_rgb(x, y, {v, v, v});
    }
  const ImageBuf out = jpeg_roundtrip(ramp, 10);
  int inter = 0, intra = 0;
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x + 1 < 64; ++x) {
      const int step = std::abs(out.at(x + 1, y, 0) - out.at(x, y, 0));
      ((x % 8 == 7) ? inter : intra) = std::max((x % 8 == 7) ? inter : intra, step);
    }
  CHECK(inter > intra);
}

TEST_CASE("salt and pepper count replays and sits within three sigma") {
  const ImageBuf flat(100, 100, 3, 128);
  auto corrupted = [&](std::uint64_t seed) {
    Rng64 rng(seed);
    const ImageBuf out = add_salt_pepper(flat, 0.1, rng);
    int n = 0;
    for (int y = 0; y < 100; ++y)
      for (int x = 0; x < 100; ++x) n += out.rgb(x, y) != Rgb{128, 128, 128};
    return n;
  };
  const int n = corrupted(5);
  CHECK(n == corrupted(5));
  CHECK(std::abs(n - 1000) <= 90);  // sigma = sqrt(10000 * 0.1 * 0.9) = 30
  Rng64 rng(1);
  CHECK(add_salt_pepper(flat, 0.0, rng) == flat);
}

TEST_CASE("gaussian noise on 256x256 constant 128") {
  Rng64 rng(6);
  const ImageBuf g = add_gaussian_noise(ImageBuf(256, 256, 1, 128), 10.0, rng);
  double s = 0, s2 = 0;
  for (auto v : g.data()) s += v;
  const double m = s / g.size();
  for (auto v : g.data()) s2 += (v - m) * (v - m);
  CHECK(std::abs(m - 128.0) <= 1.0);
  CHECK(std::abs(std::sqrt(s2 / g.size()) - 10.0) <= 1.0);
}
