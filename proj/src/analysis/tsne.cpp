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

#include "proxyforge/analysis/tsne.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "proxyforge/error.hpp"
#include "proxyforge/raster/rng.hpp"

namespace proxyforge::analysis {
namespace {

Matrix squared_distances(const Matrix& x) {
  Matrix d(x.rows, x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) {
    for (std::size_t j = i + 1; j < x.rows; ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < x.cols; ++c) {
        const double t = x(i, c) - x(j, c);
        s += t * t;
      }
      d(i, j) = d(j, i) = s;
    }
  }
  return d;
}

// Fills row i of p for bandwidth beta; returns the perplexity achieved.
double fill_row(const Matrix& dist, std::size_t i, double beta, double shift, Matrix& p) {
  const std::size_t n = dist.rows;
  double sum = 0.0;
  double weighted = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) {
      p(i, j) = 0.0;
      continue;
    }
    const double dj = dist(i, j) - shift;
    const double v = std::exp(-beta * dj);
    p(i, j) = v;
    sum += v;
    weighted += dj * v;
  }
  for (std::size_t j = 0; j < n; ++j) p(i, j) /= sum;
  const double entropy = std::log(sum) + beta * weighted / sum;
  return std::exp(entropy);
}

}  // namespace

Matrix conditional_affinities(const Matrix& x, const TsneConfig& cfg, std::vector<double>* achieved) {
  const std::size_t n = x.rows;
  const Matrix dist = squared_distances(x);
  Matrix p(n, n);
  if (achieved) achieved->assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double lo_d = std::numeric_limits<double>::infinity();
    double hi_d = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      lo_d = std::min(lo_d, dist(i, j));
      hi_d = std::max(hi_d, dist(i, j));
    }
    double perp;
    if (hi_d == lo_d) {
      perp = fill_row(dist, i, 0.0, lo_d, p);
    } else {
      double beta = 1.0 / (hi_d - lo_d);
      double beta_lo = 0.0;
      double beta_hi = std::numeric_limits<double>::infinity();
      perp = fill_row(dist, i, beta, lo_d, p);
      int step = 0;
      while (std::abs(perp - cfg.perplexity) >= cfg.perplexity_tol) {
        if (++step > cfg.max_search_steps) {
          fail(ErrorCode::kPerplexityInfeasible,
               "row " + std::to_string(i) + " cannot reach perplexity " + std::to_string(cfg.perplexity) +
                   " (stuck at " + std::to_string(perp) + ")");
        }
        if (perp > cfg.perplexity) {
          beta_lo = beta;
          beta = std::isinf(beta_hi) ? beta * 2.0 : 0.5 * (beta + beta_hi);
        } else {
          beta_hi = beta;
          beta = 0.5 * (beta + beta_lo);
        }
        perp = fill_row(dist, i, beta, lo_d, p);
      }
    }
    if (achieved) (*achieved)[i] = perp;
  }
  return p;
}

Matrix joint_affinities(const Matrix& conditional) {
  const std::size_t n = conditional.rows;
  Matrix p(n, n);
  const double scale = 1.0 / (2.0 * static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) p(i, j) = (conditional(i, j) + conditional(j, i)) * scale;
  return p;
}

double kl_divergence(const Matrix& p, const Matrix& y) {
  const std::size_t n = p.rows;
  Matrix num(n, n);
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = y(i, 0) - y(j, 0);
      const double dy = y(i, 1) - y(j, 1);
      const double v = 1.0 / (1.0 + dx * dx + dy * dy);
      num(i, j) = num(j, i) = v;
      z += 2.0 * v;
    }
  }
  double kl = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || p(i, j) <= 0.0) continue;
      kl += p(i, j) * std::log(p(i, j) / (num(i, j) / z));
    }
  }
  return std::max(0.0, kl);
}

EmbeddingRun tsne_embed(const Matrix& x, std::uint64_t seed, const TsneConfig& cfg) {
  const std::size_t n = x.rows;
  if (n < 4) fail(ErrorCode::kDegenerateParam, "t-SNE needs at least 4 points");
  if (!(cfg.perplexity > 0.0) || cfg.perplexity >= static_cast<double>(n)) {
    fail(ErrorCode::kDegenerateParam, "perplexity must lie in (0, N)");
  }
  EmbeddingRun run;
  run.config = cfg;
  const Matrix p = joint_affinities(conditional_affinities(x, cfg, &run.row_perplexity));

  raster::Rng64 rng(seed);
  Matrix y(n, 2);
  for (double& v : y.data) v = rng.normal() * cfg.init_sigma;
  Matrix update(n, 2);
  Matrix gains(n, 2, 1.0);
  Matrix grad(n, 2);
  Matrix num(n, n);

  run.kl_trace.reserve(static_cast<std::size_t>(cfg.iterations) + 1);
  run.kl_trace.push_back(kl_divergence(p, y));
  for (int it = 0; it < cfg.iterations; ++it) {
    const double exag = it < cfg.exaggeration_iters ? cfg.exaggeration : 1.0;
    const double momentum = it < cfg.momentum_switch_iter ? cfg.momentum : cfg.final_momentum;

    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double dx = y(i, 0) - y(j, 0);
        const double dy = y(i, 1) - y(j, 1);
        const double v = 1.0 / (1.0 + dx * dx + dy * dy);
        num(i, j) = num(j, i) = v;
        z += 2.0 * v;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      double gx = 0.0, gy = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const double m = (exag * p(i, j) - num(i, j) / z) * num(i, j);
        gx += m * (y(i, 0) - y(j, 0));
        gy += m * (y(i, 1) - y(j, 1));
      }
      grad(i, 0) = 4.0 * gx;
      grad(i, 1) = 4.0 * gy;
    }
    for (std::size_t k = 0; k < y.data.size(); ++k) {
      const bool same_sign = (grad.data[k] > 0.0) == (update.data[k] > 0.0);
      gains.data[k] = same_sign ? std::max(gains.data[k] * 0.8, 0.01) : gains.data[k] + 0.2;
      update.data[k] = momentum * update.data[k] - cfg.learning_rate * gains.data[k] * grad.data[k];
      y.data[k] += update.data[k];
    }
    for (std::size_t c = 0; c < 2; ++c) {
      double mean = 0.0;
      for (std::size_t i = 0; i < n; ++i) mean += y(i, c);
      mean /= static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) y(i, c) -= mean;
    }
    run.kl_trace.push_back(kl_divergence(p, y));
  }
  run.points = std::move(y);
  return run;
}

}  // namespace proxyforge::analysis
