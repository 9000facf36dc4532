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

#include "proxyforge/analysis/pca.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "proxyforge/error.hpp"

namespace proxyforge::analysis {

PcaResult pca_reduce(const Matrix& x, std::size_t k) {
  const std::size_t n = x.rows;
  const std::size_t d = x.cols;
  if (n < 2) fail(ErrorCode::kDegenerateParam, "PCA needs at least two rows");
  if (k < 1 || k > std::min(n - 1, d)) {
    fail(ErrorCode::kDegenerateParam, "PCA target dim " + std::to_string(k) + " outside [1, min(N-1, D)]");
  }
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::MatrixXd xc = Eigen::Map<const RowMat>(x.data.data(), Eigen::Index(n), Eigen::Index(d));
  const Eigen::VectorXd mean = xc.colwise().mean();
  xc.rowwise() -= mean.transpose();
  const double denom = static_cast<double>(n - 1);

  // Eigenvalues come out ascending; walk them from the back.
  Eigen::VectorXd evals;
  Eigen::MatrixXd vecs;  // D x m, columns are components
  if (d <= n) {
    const Eigen::MatrixXd cov = (xc.transpose() * xc) / denom;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    evals = es.eigenvalues();
    vecs = es.eigenvectors();
  } else {
    // Gram trick: eigenvectors of Xc Xc^T map to covariance eigenvectors.
    const Eigen::MatrixXd gram = (xc * xc.transpose()) / denom;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    evals = es.eigenvalues();
    vecs = xc.transpose() * es.eigenvectors();
    for (Eigen::Index c = 0; c < vecs.cols(); ++c) {
      const double norm = vecs.col(c).norm();
      if (norm > 0) vecs.col(c) /= norm;
    }
  }

  const Eigen::Index top = evals.size() - 1;
  const double sigma1 = std::sqrt(std::max(0.0, evals(top)) * denom);
  const double sigmak = std::sqrt(std::max(0.0, evals(top - Eigen::Index(k) + 1)) * denom);
  if (!(sigmak > 1e-10 * sigma1)) {
    fail(ErrorCode::kRankDeficient, "requested " + std::to_string(k) + " components exceed the numerical rank");
  }

  PcaResult r;
  r.mean.assign(mean.data(), mean.data() + d);
  r.components = Matrix(d, k);
  r.eigenvalues.resize(k);
  Eigen::MatrixXd comp(d, k);
  for (std::size_t c = 0; c < k; ++c) {
    Eigen::VectorXd v = vecs.col(top - Eigen::Index(c));
    Eigen::Index arg = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i)
      if (std::abs(v(i)) > std::abs(v(arg))) arg = i;
    if (v(arg) < 0) v = -v;
    comp.col(Eigen::Index(c)) = v;
    r.eigenvalues[c] = evals(top - Eigen::Index(c));
    for (std::size_t i = 0; i < d; ++i) r.components(i, c) = v(Eigen::Index(i));
  }
  const Eigen::MatrixXd proj = xc * comp;
  r.projected = Matrix(n, k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < k; ++c) r.projected(i, c) = proj(Eigen::Index(i), Eigen::Index(c));
  return r;
}

}  // namespace proxyforge::analysis
