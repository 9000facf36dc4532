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

#include <cmath>

#include "oracles.hpp"
#include "proxyforge/analysis/attention.hpp"
#include "proxyforge/analysis/matrix.hpp"
#include "proxyforge/analysis/pca.hpp"
#include "proxyforge/analysis/plots.hpp"
#include "proxyforge/analysis/tsne.hpp"
#include "proxyforge/error.hpp"
#include "proxyforge/raster/rng.hpp"

using namespace proxyforge;
using namespace proxyforge::analysis;
using raster::Rng64;

namespace {

Matrix random_matrix(Rng64& rng, std::size_t r, std::size_t c) {
  Matrix m(r, c);
  for (auto& v : m.data) v = rng.uniform(-1, 1);
  return m;
}

// Two well-separated Gaussian blobs in 10 dimensions.
Matrix blobs(std::size_t n, std::uint64_t seed) {
  Rng64 rng(seed);
  Matrix m(n, 10);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < 10; ++j) m(i, j) = rng.normal() + (i % 2 ? 6.0 : 0.0);
  return m;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kIoFailure;
}

}  // namespace

TEST_CASE("pca matches a Jacobi eigensolver on small fixtures") {
  Rng64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix x = random_matrix(rng, 5, 3);
    const auto res = pca_reduce(x, 3);
    std::vector<double> mean(3, 0);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 3; ++j) mean[j] += x(i, j) / 5;
    std::vector<std::vector<double>> cov(3, std::vector<double>(3, 0));
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b) cov[a][b] += (x(i, a) - mean[a]) * (x(i, b) - mean[b]) / 4;
    std::vector<double> vals;
    std::vector<std::vector<double>> vecs;
    oracle::jacobi_eigen(cov, vals, vecs);
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(std::abs(res.eigenvalues[k] - vals[k]) < 1e-8);
      // Same sign convention: largest-magnitude coordinate positive.
      std::size_t big = 0;
      for (std::size_t r = 1; r < 3; ++r)
        if (std::abs(vecs[r][k]) > std::abs(vecs[big][k])) big = r;
      const double sign = vecs[big][k] < 0 ? -1.0 : 1.0;
      for (std::size_t r = 0; r < 3; ++r) CHECK(std::abs(res.components(r, k) - sign * vecs[r][k]) < 1e-8);
    }
  }
}

TEST_CASE("pca components are orthonormal in the wide case") {
  Rng64 rng(2);
  const Matrix x = random_matrix(rng, 12, 40);
  const auto res = pca_reduce(x, 8);
  for (std::size_t a = 0; a < 8; ++a)
    for (std::size_t b = 0; b < 8; ++b) {
      double dot = 0;
      for (std::size_t r = 0; r < 40; ++r) dot += res.components(r, a) * res.components(r, b);
      CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) < 1e-6);
    }
  for (std::size_t k = 1; k < 8; ++k) CHECK(res.eigenvalues[k] <= res.eigenvalues[k - 1]);
  CHECK(res.projected.rows == 12);
  CHECK(res.projected.cols == 8);
}

TEST_CASE("pca rejects rank deficiency and bad k") {
  Matrix x(4, 3);
  for (std::size_t i = 0; i < 4; ++i) {
    x(i, 0) = i;
    x(i, 1) = 2.0 * i;
    x(i, 2) = 1.0;
  }
  CHECK(code_of([&] { pca_reduce(x, 2); }) == ErrorCode::kRankDeficient);
  CHECK(pca_reduce(x, 1).eigenvalues.size() == 1);
  CHECK(code_of([&] { pca_reduce(x, 4); }) == ErrorCode::kDegenerateParam);
}

TEST_CASE("conditional affinities hit the target perplexity") {
  const Matrix x = blobs(50, 3);
  TsneConfig cfg;
  std::vector<double> achieved;
  const Matrix p = conditional_affinities(x, cfg, &achieved);
  for (std::size_t i = 0; i < 50; ++i) {
    CHECK(std::abs(achieved[i] - 30.0) < 1e-4);
    double row = 0, h = 0;
    CHECK(p(i, i) == 0.0);
    for (std::size_t j = 0; j < 50; ++j) {
      row += p(i, j);
      if (p(i, j) > 0) h -= p(i, j) * std::log(p(i, j));
    }
    CHECK(std::abs(row - 1.0) < 1e-12);
    // Independent recomputation of the perplexity from the row itself.
    CHECK(std::abs(std::exp(h) - 30.0) < 1e-4);
  }
}

TEST_CASE("a row with equal distances is uniform") {
  Matrix x(4, 3, 0.0);
  x(1, 0) = 1;
  x(2, 1) = 1;
  x(3, 2) = 1;
  TsneConfig cfg;
  cfg.perplexity = 2;
  const Matrix p = conditional_affinities(x, cfg);
  for (std::size_t j = 1; j < 4; ++j) CHECK(p(0, j) == doctest::Approx(1.0 / 3));
}

TEST_CASE("joint affinities are symmetric and sum to one") {
  const Matrix p = joint_affinities(conditional_affinities(blobs(20, 4), TsneConfig{.perplexity = 5}));
  double s = 0;
  for (std::size_t i = 0; i < 20; ++i)
    for (std::size_t j = 0; j < 20; ++j) {
      s += p(i, j);
      CHECK(p(i, j) == p(j, i));
    }
  CHECK(std::abs(s - 1.0) < 1e-12);
}

TEST_CASE("t-SNE lowers KL and separates the blobs") {
  TsneConfig cfg;
  cfg.iterations = 400;
  const auto run = tsne_embed(blobs(50, 5), 42, cfg);
  REQUIRE(run.kl_trace.size() == 401);
  CHECK(run.kl_trace.back() < run.kl_trace.front());
  double cx[2] = {0, 0}, spread = 0;
  for (std::size_t i = 0; i < 50; ++i) cx[i % 2] += run.points(i, 0) / 25;
  for (std::size_t i = 0; i < 50; ++i) spread += std::abs(run.points(i, 0) - cx[i % 2]) / 50;
  const double gap = std::abs(cx[0] - cx[1]);
  CHECK(gap > spread);  // not a proof of separation, but a sanity floor
  const auto again = tsne_embed(blobs(50, 5), 42, cfg);
  CHECK(again.points.data == run.points.data);
}

TEST_CASE("t-SNE argument checks") {
  CHECK(code_of([] { tsne_embed(Matrix(3, 2, 0.0), 1); }) == ErrorCode::kDegenerateParam);
  CHECK(code_of([] { tsne_embed(blobs(20, 1), 1); }) == ErrorCode::kDegenerateParam);
}

TEST_CASE("attention: two keys, hand-worked softmax") {
  // d = 1, q = ln(4) * 1, keys 0 and 1 -> scores 0, ln 4 -> [0.2, 0.8].
  const Tensor q = make_tensor({1, 1, 1}, {static_cast<float>(std::log(4.0))});
  const Tensor k = make_tensor({2, 1, 1}, {0.0f, 1.0f});
  const Tensor a = attention_from_qk(q, k);
  REQUIRE(a.dims == std::vector<std::uint64_t>{1, 1, 2});
  CHECK(a.data[0] == doctest::Approx(0.2).epsilon(1e-6));
  CHECK(a.data[1] == doctest::Approx(0.8).epsilon(1e-6));
}

TEST_CASE("attention: grouped heads match the naive computation") {
  Rng64 rng(6);
  const std::size_t q_len = 5, kv_len = 7, heads = 4, kv_heads = 2, d = 8;
  std::vector<float> qd, kd;
  for (std::size_t i = 0; i < q_len * heads * d; ++i) qd.push_back(static_cast<float>(rng.normal()));
  for (std::size_t i = 0; i < kv_len * kv_heads * d; ++i) kd.push_back(static_cast<float>(rng.normal()));
  const Tensor a = attention_from_qk(make_tensor({q_len, heads, d}, qd), make_tensor({kv_len, kv_heads, d}, kd));
  for (std::size_t h = 0; h < heads; ++h) {
    const std::size_t g = h / (heads / kv_heads);
    std::vector<std::vector<double>> keys;
    for (std::size_t t = 0; t < kv_len; ++t)
      keys.emplace_back(kd.begin() + static_cast<long>((t * kv_heads + g) * d),
                        kd.begin() + static_cast<long>((t * kv_heads + g + 1) * d));
    for (std::size_t i = 0; i < q_len; ++i) {
      const std::vector<double> qv(qd.begin() + static_cast<long>((i * heads + h) * d),
                                   qd.begin() + static_cast<long>((i * heads + h + 1) * d));
      const auto want = oracle::attention_row(qv, keys);
      double row = 0;
      for (std::size_t t = 0; t < kv_len; ++t) {
        const double got = a.data[(h * q_len + i) * kv_len + t];
        row += got;
        CHECK(std::abs(got - want[t]) < 1e-6);
      }
      CHECK(std::abs(row - 1.0) < 1e-6);
    }
  }
  // Heads sharing a KV head see identical scores when their queries agree.
  CHECK_THROWS_AS(attention_from_qk(make_tensor({1, 3, 2}, std::vector<float>(6)),
                                    make_tensor({1, 2, 2}, std::vector<float>(4))),
                  Error);
}

TEST_CASE("select_layers_mean averages the chosen layers") {
  const Tensor t = make_tensor({3, 2}, {1, 2, 3, 4, 10, 20});
  const std::vector<std::size_t> layers{0, 2};
  const Tensor m = select_layers_mean(t, layers);
  CHECK(m.dims == std::vector<std::uint64_t>{2});
  CHECK(m.data == std::vector<float>{5.5f, 11.0f});
}

TEST_CASE("keyword shares: uniform attention gives token-count proportions") {
  // 8 kv tokens: 2 object, 1 position, 1 color, 4 others.
  const char* json = R"({"tokens": [
    {"index": 0, "text": "a", "category": "others"}, {"index": 1, "text": "red", "category": "color"},
    {"index": 2, "text": "cat", "category": "object"}, {"index": 3, "text": "left", "category": "position"},
    {"index": 4, "text": "of", "category": "others"}, {"index": 5, "text": "dog", "category": "object"},
    {"index": 6, "text": "the", "category": "others"}, {"index": 7, "text": ".", "category": "others"}]})";
  const auto map = parse_category_map(json);
  const Tensor q = make_tensor({4, 2, 4}, std::vector<float>(32, 0.0f));
  const Tensor k = make_tensor({8, 1, 4}, std::vector<float>(32, 0.3f));
  const std::vector<Tensor> steps(5, attention_from_qk(q, k));
  const std::vector<std::size_t> latent{0, 1, 2, 3};
  const auto shares = keyword_attention(steps, latent, map);
  CHECK(shares.timesteps_used == 3);
  CHECK(shares.percent[0] == 25.0);
  CHECK(shares.percent[1] == 12.5);
  CHECK(shares.percent[2] == 12.5);
  CHECK(shares.percent[3] == 50.0);
  const std::string report = format_keyword_report(shares, map);
  CHECK(report.find("object: 25.00%") != std::string::npos);
}

TEST_CASE("keyword shares sum to 100 on random attention") {
  Rng64 rng(7);
  std::string json = R"({"tokens": [)";
  const char* cats[] = {"object", "position", "color", "others"};
  for (int t = 0; t < 11; ++t)
    json += (t ? "," : "") + std::string(R"({"index": )") + std::to_string(t) + R"(, "text": "w", "category": ")" +
            cats[t % 4] + "\"}";
  json += "]}";
  const auto map = parse_category_map(json);
  std::vector<float> qd(6 * 4 * 5), kd(11 * 2 * 5);
  for (auto& v : qd) v = static_cast<float>(rng.normal());
  for (auto& v : kd) v = static_cast<float>(rng.normal());
  const std::vector<Tensor> steps{attention_from_qk(make_tensor({6, 4, 5}, qd), make_tensor({11, 2, 5}, kd))};
  const std::vector<std::size_t> latent{1, 3, 5};
  const auto shares = keyword_attention(steps, latent, map);
  CHECK(std::abs(shares.percent[0] + shares.percent[1] + shares.percent[2] + shares.percent[3] - 100.0) < 1e-6);
}

TEST_CASE("category map gaps are rejected") {
  const auto map = parse_category_map(R"({"tokens": [{"index": 0, "text": "a", "category": "object"},
                                                     {"index": 2, "text": "b", "category": "color"}]})");
  const std::vector<Tensor> steps{attention_from_qk(make_tensor({1, 1, 2}, {0, 0}),
                                                    make_tensor({3, 1, 2}, {0, 0, 0, 0, 0, 0}))};
  const std::vector<std::size_t> latent{0};
  CHECK(code_of([&] { keyword_attention(steps, latent, map); }) == ErrorCode::kCategoryGap);
  CHECK_THROWS_AS(parse_category_map(R"({"tokens": [{"index": 0, "text": "a", "category": "verb"}]})"), Error);
}

TEST_CASE("csv and svg writers") {
  Matrix pts(2, 2);
  pts(0, 0) = 0.1;
  pts(1, 1) = -3;
  const std::string csv = points_csv(pts, {"a", "b"});
  CHECK(csv.find("0.10000000000000001") != std::string::npos);
  const std::string svg = scatter_svg(pts, {"<x>", "b"});
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("&lt;x&gt;") != std::string::npos);
}

TEST_CASE("attention: duplicated query heads give equal blocks") {
  Rng64 rng(9);
  const std::size_t q_len = 3, kv_len = 5, d = 4;
  std::vector<float> head0, head2, qd, kd;
  for (std::size_t i = 0; i < q_len * d; ++i) head0.push_back(static_cast<float>(rng.normal()));
  for (std::size_t i = 0; i < q_len * d; ++i) head2.push_back(static_cast<float>(rng.normal()));
  for (std::size_t i = 0; i < q_len; ++i)
    for (const auto* h : {&head0, &head0, &head2, &head2})
      qd.insert(qd.end(), h->begin() + static_cast<long>(i * d), h->begin() + static_cast<long>((i + 1) * d));
  for (std::size_t i = 0; i < kv_len * 2 * d; ++i) kd.push_back(static_cast<float>(rng.normal()));
  const Tensor a = attention_from_qk(make_tensor({q_len, 4, d}, qd), make_tensor({kv_len, 2, d}, kd));
  const std::size_t block = q_len * kv_len;
  auto head = [&](std::size_t h) { return std::vector<float>(a.data.begin() + h * block, a.data.begin() + (h + 1) * block); };
  CHECK(head(0) == head(1));
  CHECK(head(2) == head(3));
  CHECK(head(0) != head(2));
}

TEST_CASE("pca on data lying along one axis") {
  Rng64 rng(11);
  Matrix x(12, 3);
  for (std::size_t i = 0; i < 12; ++i) x(i, 1) = rng.uniform(-5, 5);
  const auto res = pca_reduce(x, 1);
  CHECK(std::abs(std::abs(res.components(1, 0)) - 1.0) < 1e-12);
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = 0; j < 12; ++j)
      CHECK(std::abs(std::abs(res.projected(i, 0) - res.projected(j, 0)) - std::abs(x(i, 1) - x(j, 1))) < 1e-12);
  CHECK(kDefaultPcaDims == 50);
  CHECK(TsneConfig{}.perplexity == 30.0);
}

TEST_CASE("pca projected variance equals each eigenvalue") {
  Rng64 rng(12);
  const Matrix x = random_matrix(rng, 30, 6);
  const auto res = pca_reduce(x, 4);
  for (std::size_t k = 0; k < 4; ++k) {
    double m = 0, v = 0;
    for (std::size_t i = 0; i < 30; ++i) m += res.projected(i, k) / 30;
    for (std::size_t i = 0; i < 30; ++i) v += (res.projected(i, k) - m) * (res.projected(i, k) - m) / 29;
    CHECK(std::abs(v - res.eigenvalues[k]) < 1e-6);
  }
}

TEST_CASE("attention: zero scores are uniform and rows ignore a constant shift") {
  // Q orthogonal to every K row.
  const Tensor q = make_tensor({1, 1, 2}, {1, 0});
  const Tensor k = make_tensor({4, 1, 2}, {0, 1, 0, 2, 0, -1, 0, 3});
  for (float v : attention_from_qk(q, k).data) CHECK(std::abs(v - 0.25f) < 1e-7);
  // Adding a constant component along q to every key shifts all scores equally.
  const Tensor q2 = make_tensor({1, 1, 2}, {0.5f, 1.0f});
  const Tensor k2 = make_tensor({3, 1, 2}, {0.0f, 0.1f, 0.0f, 0.7f, 0.0f, -0.4f});
  const Tensor k3 = make_tensor({3, 1, 2}, {2.0f, 0.1f, 2.0f, 0.7f, 2.0f, -0.4f});
  const Tensor a = attention_from_qk(q2, k2), b = attention_from_qk(q2, k3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(a.data[i] - b.data[i]) < 1e-6);
}

TEST_CASE("keyword shares: concentrated attention and permutation within a category") {
  const char* json = R"({"tokens": [
    {"index": 0, "text": "a", "category": "others"}, {"index": 1, "text": "red", "category": "color"},
    {"index": 2, "text": "cat", "category": "object"}, {"index": 3, "text": "dog", "category": "object"}]})";
  const auto map = parse_category_map(json);
  const std::vector<std::size_t> latent{0, 1};
  const std::vector<Tensor> one{make_tensor({1, 2, 4}, {0, 1, 0, 0, 0, 1, 0, 0})};
  const auto shares = keyword_attention(one, latent, map);
  CHECK(shares.percent[2] == 100.0);
  CHECK(shares.percent[0] + shares.percent[1] + shares.percent[3] == 0.0);

  Rng64 rng(13);
  std::vector<float> d(2 * 2 * 4);
  for (auto& v : d) v = static_cast<float>(rng.uniform(0.01, 1.0));
  std::vector<float> swapped = d;
  for (std::size_t row = 0; row < 4; ++row) std::swap(swapped[row * 4 + 2], swapped[row * 4 + 3]);
  const std::vector<Tensor> s1{make_tensor({2, 2, 4}, d)}, s2{make_tensor({2, 2, 4}, swapped)};
  const auto p1 = keyword_attention(s1, latent, map), p2 = keyword_attention(s2, latent, map);
  for (std::size_t c = 0; c < 4; ++c) CHECK(std::abs(p1.percent[c] - p2.percent[c]) < 1e-9);
}
