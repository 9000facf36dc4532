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

#include "proxyforge/depthfilter/depth_filter.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "proxyforge/analysis/tensor_dump.hpp"
#include "proxyforge/error.hpp"
#include "proxyforge/proxytasks/sample.hpp"
#include "proxyforge/raster/image_io.hpp"

namespace proxyforge::depthfilter {
namespace {

void check_finite(const FloatMap& m) {
  for (float v : m.data)
    if (!std::isfinite(v)) fail(ErrorCode::kNonFiniteDepth, "depth map contains non-finite values");
}

}  // namespace

FloatMap normalize_minmax(const FloatMap& m) {
  check_finite(m);
  FloatMap out{m.width, m.height, std::vector<float>(m.data.size(), 0.0f)};
  if (m.data.empty()) return out;
  const auto [lo_it, hi_it] = std::minmax_element(m.data.begin(), m.data.end());
  const double lo = *lo_it;
  const double range = double(*hi_it) - lo;
  if (range == 0.0) return out;
  for (std::size_t i = 0; i < m.data.size(); ++i) out.data[i] = static_cast<float>((m.data[i] - lo) / range);
  return out;
}

AlignResult least_squares_align(const FloatMap& d1_in, const FloatMap& d2_in, const AlignOptions& opt) {
  if (d1_in.width != d2_in.width || d1_in.height != d2_in.height || d1_in.data.size() != d2_in.data.size()) {
    fail(ErrorCode::kDimensionMismatch, "depth maps differ in size");
  }
  if (d1_in.data.empty()) fail(ErrorCode::kDimensionMismatch, "empty depth maps");
  check_finite(d1_in);
  check_finite(d2_in);
  const FloatMap d1 = opt.normalize ? normalize_minmax(d1_in) : d1_in;
  const FloatMap d2 = opt.normalize ? normalize_minmax(d2_in) : d2_in;

  const double n = static_cast<double>(d1.data.size());
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < d1.data.size(); ++i) {
    m1 += d1.data[i];
    m2 += d2.data[i];
  }
  m1 /= n;
  m2 /= n;
  double cov = 0.0, var = 0.0;
  for (std::size_t i = 0; i < d1.data.size(); ++i) {
    const double c2 = d2.data[i] - m2;
    cov += c2 * (d1.data[i] - m1);
    var += c2 * c2;
  }
  AlignResult r;
  r.a = var > 0.0 ? cov / var : 0.0;
  r.b = m1 - r.a * m2;
  double abs_sum = 0.0;
  for (std::size_t i = 0; i < d1.data.size(); ++i) abs_sum += std::abs(r.a * d2.data[i] + r.b - d1.data[i]);
  r.discrepancy = abs_sum / n;
  return r;
}

FilterOutcome filter_and_refill(std::size_t pair_count, std::size_t reserve_count, const PairScorer& score,
                                double threshold, std::size_t quota, raster::Rng64& rng) {
  if (quota > pair_count) {
    fail(ErrorCode::kDegenerateParam, "quota " + std::to_string(quota) + " exceeds the " +
                                          std::to_string(pair_count) + " candidate pairs");
  }
  FilterOutcome out;
  auto consider = [&](bool from_reserve, std::size_t i) {
    FilterRecord rec = score(from_reserve, i);
    rec.from_reserve = from_reserve;
    rec.index = i;
    rec.kept = rec.align.discrepancy <= threshold;
    out.log.push_back(rec);
    if (rec.kept) out.kept.push_back(std::move(rec));
  };
  for (std::size_t i = 0; i < pair_count && out.kept.size() < quota; ++i) consider(false, i);
  if (out.kept.size() == quota) return out;

  std::vector<std::size_t> order(reserve_count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  const std::size_t before = out.kept.size();
  for (std::size_t j = 0; j < order.size() && out.kept.size() < quota; ++j) consider(true, order[j]);
  out.replacements = out.kept.size() - before;
  if (out.kept.size() < quota) {
    fail(ErrorCode::kReserveExhausted, "reserve exhausted with " + std::to_string(out.kept.size()) + " of " +
                                           std::to_string(quota) + " pairs kept");
  }
  return out;
}

FilterOutcome filter_and_refill(const std::vector<DepthPair>& pairs, double threshold, std::size_t quota,
                                const std::vector<DepthPair>& reserve, raster::Rng64& rng) {
  auto score = [&](bool from_reserve, std::size_t i) {
    const DepthPair& p = from_reserve ? reserve[i] : pairs[i];
    FilterRecord rec;
    rec.image_id = p.image_id;
    rec.align = least_squares_align(p.primary, p.secondary);
    return rec;
  };
  return filter_and_refill(pairs.size(), reserve.size(), score, threshold, quota, rng);
}

void write_rejection_log(const std::filesystem::path& path, const FilterOutcome& outcome, double threshold) {
  using Json = nlohmann::ordered_json;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIoFailure, "cannot write " + path.string());
  out << Json{{"metric", kMetricName}, {"threshold", threshold}}.dump() << '\n';
  for (const auto& r : outcome.log) {
    Json row;
    row["image_id"] = r.image_id;
    row["a"] = r.align.a;
    row["b"] = r.align.b;
    row["discrepancy"] = r.align.discrepancy;
    row["kept"] = r.kept;
    out << row.dump() << '\n';
  }
  if (!out) fail(ErrorCode::kIoFailure, "cannot write " + path.string());
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t common = 0;
  for (const auto& id : a) common += b.count(id);
  return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

OverlapReport overlap_report(const std::vector<std::pair<std::string, std::set<std::string>>>& datasets,
                             double min_overlap) {
  OverlapReport rep;
  rep.min_overlap = min_overlap;
  const std::size_t n = datasets.size();
  rep.jaccard.assign(n, std::vector<double>(n, 1.0));
  for (const auto& d : datasets) rep.names.push_back(d.first);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = jaccard(datasets[i].second, datasets[j].second);
      rep.jaccard[i][j] = rep.jaccard[j][i] = s;
      if (s < min_overlap) rep.flagged.emplace_back(i, j);
    }
  }
  return rep;
}

std::set<std::string> manifest_source_ids(const std::filesystem::path& manifest) {
  if (!std::filesystem::exists(manifest)) fail(ErrorCode::kMissingFile, "no such manifest: " + manifest.string());
  std::ifstream in(manifest);
  if (!in) fail(ErrorCode::kIoFailure, "cannot read " + manifest.string());
  std::set<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto row = nlohmann::json::parse(line, nullptr, false);
    if (row.is_discarded()) fail(ErrorCode::kIoFailure, "unparseable manifest line in " + manifest.string());
    if (!row.contains("sample_id")) continue;  // header
    ids.insert(proxytasks::source_id_of(row["sample_id"].get<std::string>()));
  }
  return ids;
}

FloatMap read_depth_map(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  FloatMap m;
  if (ext == ".png") {
    const raster::Gray16 g = raster::read_png16(path);
    m.width = g.width;
    m.height = g.height;
    m.data.assign(g.data.begin(), g.data.end());
    return m;
  }
  const analysis::Tensor t = analysis::read_tensor_dump(path, true);
  std::vector<std::uint64_t> dims = t.dims;
  if (dims.size() == 3 && dims[0] == 1) dims.erase(dims.begin());
  else if (dims.size() == 3 && dims[2] == 1) dims.pop_back();
  if (dims.size() != 2 || dims[0] == 0 || dims[1] == 0) {
    fail(ErrorCode::kMalformedTensor, "depth dump must be [H, W]: " + path.string());
  }
  m.height = static_cast<int>(dims[0]);
  m.width = static_cast<int>(dims[1]);
  m.data = t.data;
  check_finite(m);
  return m;
}

}  // namespace proxyforge::depthfilter
