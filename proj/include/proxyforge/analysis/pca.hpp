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

#include "proxyforge/analysis/matrix.hpp"

namespace proxyforge::analysis {

inline constexpr int kDefaultPcaDims = 50;

struct PcaResult {
  Matrix projected;                  // N x k
  Matrix components;                 // D x k, orthonormal columns
  std::vector<double> eigenvalues;   // k, descending; sample covariance (N - 1)
  std::vector<double> mean;          // D
};

// Mean-centered PCA. Each component's largest-magnitude coordinate is made
// positive. Throws DegenerateParam (N < 2, k out of range) and RankDeficient
// when the k-th singular value is at or below 1e-10 of the first.
PcaResult pca_reduce(const Matrix& x, std::size_t k);

}  // namespace proxyforge::analysis
