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

#include "proxyforge/analysis/attention.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "proxyforge/error.hpp"

namespace proxyforge::analysis {

Tensor attention_from_qk(const Tensor& q, const Tensor& k) {
  if (q.rank() != 3 || k.rank() != 3) fail(ErrorCode::kMalformedTensor, "Q and K must be rank 3");
  const std::size_t q_len = q.dims[0], n_heads = q.dims[1], d = q.dims[2];
  const std::size_t kv_len = k.dims[0], n_kv = k.dims[1];
  if (k.dims[2] != d) fail(ErrorCode::kMalformedTensor, "Q and K head dims differ");
  if (n_kv == 0 || n_heads % n_kv != 0) {
    fail(ErrorCode::kHeadMismatch, std::to_string(n_heads) + " query heads cannot share " + std::to_string(n_kv) +
                                       " KV heads");
  }
  if (d == 0 || kv_len == 0) fail(ErrorCode::kMalformedTensor, "empty head or key dimension");
  const std::size_t group = n_heads / n_kv;
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));

  Tensor out;
  out.dims = {n_heads, q_len, kv_len};
  out.data.resize(n_heads * q_len * kv_len);
  std::vector<double> scores(kv_len);
  for (std::size_t h = 0; h < n_heads; ++h) {
    const std::size_t kh = h / group;
    for (std::size_t i = 0; i < q_len; ++i) {
      const float* qi = &q.data[(i * n_heads + h) * d];
      double peak = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < kv_len; ++j) {
        const float* kj = &k.data[(j * n_kv + kh) * d];
        double s = 0.0;
        for (std::size_t c = 0; c < d; ++c) s += double(qi[c]) * double(kj[c]);
        scores[j] = s * scale;
        peak = std::max(peak, scores[j]);
      }
      double total = 0.0;
      for (double& s : scores) total += (s = std::exp(s - peak));
      float* row = &out.data[(h * q_len + i) * kv_len];
      for (std::size_t j = 0; j < kv_len; ++j) row[j] = static_cast<float>(scores[j] / total);
    }
  }
  return out;
}

Tensor select_layers_mean(const Tensor& t, std::span<const std::size_t> layers) {
  if (t.rank() < 2) fail(ErrorCode::kMalformedTensor, "no layer axis to select from");
  if (layers.empty()) fail(ErrorCode::kDegenerateParam, "no layers selected");
  const std::size_t stride = t.data.size() / t.dims[0];
  Tensor out;
  out.dims.assign(t.dims.begin() + 1, t.dims.end());
  std::vector<double> acc(stride, 0.0);
  for (std::size_t l : layers) {
    if (l >= t.dims[0]) fail(ErrorCode::kDegenerateParam, "layer " + std::to_string(l) + " out of range");
    for (std::size_t i = 0; i < stride; ++i) acc[i] += t.data[l * stride + i];
  }
  out.data.resize(stride);
  for (std::size_t i = 0; i < stride; ++i) out.data[i] = static_cast<float>(acc[i] / double(layers.size()));
  return out;
}

std::string_view category_name(TokenCategory c) noexcept {
  switch (c) {
    case TokenCategory::kObject: return "object";
    case TokenCategory::kPosition: return "position";
    case TokenCategory::kColor: return "color";
    case TokenCategory::kOthers: return "others";
  }
  return "others";
}

TokenCategoryMap parse_category_map(std::string_view json_text) {
  const auto j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.contains("tokens") || !j["tokens"].is_array()) {
    fail(ErrorCode::kInvalidConfig, "category map must be {\"tokens\": [...]}");
  }
  TokenCategoryMap map;
  for (const auto& t : j["tokens"]) {
    try {
      TokenInfo info;
      info.index = t.at("index").get<std::size_t>();
      info.text = t.value("text", "");
      const auto cat = t.at("category").get<std::string>();
      auto it = std::find_if(kTokenCategories.begin(), kTokenCategories.end(),
                             [&](TokenCategory c) { return category_name(c) == cat; });
      if (it == kTokenCategories.end()) fail(ErrorCode::kInvalidConfig, "unknown token category '" + cat + "'");
      info.category = *it;
      map.tokens.push_back(std::move(info));
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::kInvalidConfig, std::string("bad category map entry: ") + e.what());
    }
  }
  return map;
}

TokenCategoryMap load_category_map(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) fail(ErrorCode::kMissingFile, "no such file: " + path.string());
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  if (!in) fail(ErrorCode::kIoFailure, "cannot read " + path.string());
  return parse_category_map(ss.str());
}

KeywordShares keyword_attention(std::span<const Tensor> timesteps, std::span<const std::size_t> latent_queries,
                                const TokenCategoryMap& map) {
  if (timesteps.empty()) fail(ErrorCode::kDegenerateParam, "keyword attention needs at least one timestep");
  if (latent_queries.empty()) fail(ErrorCode::kDegenerateParam, "no latent query positions given");
  const Tensor& first = timesteps.front();
  if (first.rank() != 3) fail(ErrorCode::kMalformedTensor, "attention must be [heads, q_len, kv_len]");
  const std::size_t kv_len = first.dims[2];

  std::vector<int> category_of(kv_len, -1);
  for (const auto& t : map.tokens) {
    if (t.index >= kv_len) fail(ErrorCode::kCategoryGap, "token index " + std::to_string(t.index) + " beyond kv length");
    if (category_of[t.index] != -1) fail(ErrorCode::kCategoryGap, "token " + std::to_string(t.index) + " assigned twice");
    category_of[t.index] = static_cast<int>(t.category);
  }
  for (std::size_t j = 0; j < kv_len; ++j)
    if (category_of[j] < 0) fail(ErrorCode::kCategoryGap, "kv token " + std::to_string(j) + " has no category");

  KeywordShares out;
  out.token_percent.assign(kv_len, 0.0);
  out.timesteps_used = std::min<std::size_t>(3, timesteps.size());
  for (std::size_t s = 0; s < out.timesteps_used; ++s) {
    const Tensor& a = timesteps[s];
    if (a.dims != first.dims) fail(ErrorCode::kMalformedTensor, "timestep attention shapes differ");
    const std::size_t heads = a.dims[0], q_len = a.dims[1];
    std::vector<double> mass(kv_len, 0.0);
    for (std::size_t h = 0; h < heads; ++h) {
      for (std::size_t qi : latent_queries) {
        if (qi >= q_len) fail(ErrorCode::kDegenerateParam, "latent query index out of range");
        const float* row = &a.data[(h * q_len + qi) * kv_len];
        for (std::size_t j = 0; j < kv_len; ++j) mass[j] += row[j];
      }
    }
    double total = 0.0;
    for (double m : mass) total += m;
    if (!(total > 0.0)) fail(ErrorCode::kDegenerateParam, "attention mass is zero");
    for (std::size_t j = 0; j < kv_len; ++j) {
      const double pct = 100.0 * mass[j] / total;
      out.token_percent[j] += pct;
      out.percent[static_cast<std::size_t>(category_of[j])] += pct;
    }
  }
  const double n = static_cast<double>(out.timesteps_used);
  for (double& p : out.percent) p /= n;
  for (double& p : out.token_percent) p /= n;
  return out;
}

std::string format_keyword_report(const KeywordShares& shares, const TokenCategoryMap& map) {
  std::string out;
  char buf[64];
  for (std::size_t c = 0; c < kTokenCategories.size(); ++c) {
    std::snprintf(buf, sizeof buf, "%.2f%%", shares.percent[c]);
    out += std::string(category_name(kTokenCategories[c])) + ": " + buf + "\n";
  }
  auto tokens = map.tokens;
  std::sort(tokens.begin(), tokens.end(), [](const TokenInfo& a, const TokenInfo& b) { return a.index < b.index; });
  for (const auto& t : tokens) {
    if (t.index >= shares.token_percent.size()) continue;
    std::snprintf(buf, sizeof buf, "%.2f%%", shares.token_percent[t.index]);
    out += (t.text.empty() ? "#" + std::to_string(t.index) : t.text) + ": " + buf + "\n";
  }
  return out;
}

}  // namespace proxyforge::analysis
