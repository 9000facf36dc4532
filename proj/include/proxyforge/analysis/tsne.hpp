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
#include <vector>

#include "proxyforge/analysis/matrix.hpp"

namespace proxyforge::analysis {

struct TsneConfig {
  double perplexity = 30.0;
  int iterations = 1000;
  double learning_rate = 200.0;
  double momentum = 0.5;
  double final_momentum = 0.8;
  int momentum_switch_iter = 250;
  double exaggeration = 12.0;
  int exaggeration_iters = 250;
  double init_sigma = 1e-4;
  double perplexity_tol = 1e-5;  // |achieved - target| per row
  int max_search_steps = 200;
};

struct EmbeddingRun {
  Matrix points;                  // N x 2
  std::vector<double> kl_trace;   // KL(P || Q) before the first step and after each step
  std::vector<double> row_perplexity;
  TsneConfig config;
};

// Row-conditional affinities p(j|i) from squared distances with per-row
// bandwidth set by binary search. A row whose distances are all equal is
// uniform (perplexity N - 1) whatever the target. Throws PerplexityInfeasible.
Matrix conditional_affinities(const Matrix& x, const TsneConfig& cfg, std::vector<double>* achieved = nullptr);
// (P + P^T) / (2N).
Matrix joint_affinities(const Matrix& conditional);

double kl_divergence(const Matrix& p, const Matrix& y);

// Exact O(N^2) t-SNE to two dimensions. Throws DegenerateParam (N < 4,
// perplexity >= N) and PerplexityInfeasible.
EmbeddingRun tsne_embed(const Matrix& x, std::uint64_t seed, const TsneConfig& cfg = {});

}  // namespace proxyforge::analysis
