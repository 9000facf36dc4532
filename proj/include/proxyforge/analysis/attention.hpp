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

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "proxyforge/analysis/tensor_dump.hpp"

namespace proxyforge::analysis {

// Q [q_len, n_heads, d], K [kv_len, n_kv_heads, d] -> [n_heads, q_len, kv_len].
// KV heads are repeated n_heads / n_kv_heads times (head h reads KV head
// h / group). Throws HeadMismatch, MalformedTensor.
Tensor attention_from_qk(const Tensor& q, const Tensor& k);

// Mean over a leading layer axis restricted to `layers`: [L, ...] -> [...].
Tensor select_layers_mean(const Tensor& t, std::span<const std::size_t> layers);

enum class TokenCategory { kObject, kPosition, kColor, kOthers };
inline constexpr std::array<TokenCategory, 4> kTokenCategories = {
    TokenCategory::kObject, TokenCategory::kPosition, TokenCategory::kColor, TokenCategory::kOthers};

std::string_view category_name(TokenCategory c) noexcept;

struct TokenInfo {
  std::size_t index = 0;
  std::string text;
  TokenCategory category = TokenCategory::kOthers;
};

struct TokenCategoryMap {
  std::vector<TokenInfo> tokens;
};

// {"tokens": [{"index": i, "text": t, "category": c}]}. Throws InvalidConfig.
TokenCategoryMap parse_category_map(std::string_view json_text);
TokenCategoryMap load_category_map(const std::filesystem::path& path);

struct KeywordShares {
  std::array<double, 4> percent{};   // by kTokenCategories order
  std::vector<double> token_percent;  // per kv token
  std::size_t timesteps_used = 0;
};

// Per timestep: mean over heads and the latent query rows, sum by category,
// percent of total. Percent vectors are averaged over the first min(3, T)
// timesteps. Throws CategoryGap, DegenerateParam.
KeywordShares keyword_attention(std::span<const Tensor> timesteps, std::span<const std::size_t> latent_queries,
                                const TokenCategoryMap& map);

// "object: 25.00%" lines per category, then "<token>: 4.70%" per token.
std::string format_keyword_report(const KeywordShares& shares, const TokenCategoryMap& map);

}  // namespace proxyforge::analysis
