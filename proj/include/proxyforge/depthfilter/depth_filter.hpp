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

#include <cstddef>
#include <filesystem>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "proxyforge/raster/float_map.hpp"
#include "proxyforge/raster/rng.hpp"

namespace proxyforge::depthfilter {

using raster::FloatMap;

inline constexpr double kDefaultThreshold = 0.4;
inline constexpr char kMetricName[] = "mean_abs_residual_minmax";

struct DepthPair {
  std::string image_id;
  FloatMap primary;    // kept as supervision
  FloatMap secondary;  // cross-check only
};

struct AlignResult {
  double a = 0.0;
  double b = 0.0;
  double discrepancy = 0.0;
};

struct AlignOptions {
  bool normalize = true;  // min-max both maps before fitting
};

// Min-max to [0, 1]; a constant map becomes all zeros. Throws NonFiniteDepth.
FloatMap normalize_minmax(const FloatMap& m);

// Fits d1 ~ a * d2 + b in closed form and reports the mean absolute residual.
// Throws DimensionMismatch, NonFiniteDepth.
AlignResult least_squares_align(const FloatMap& d1, const FloatMap& d2, const AlignOptions& opt = {});

struct FilterRecord {
  std::string image_id;
  AlignResult align;
  bool kept = false;
  bool from_reserve = false;
  std::size_t index = 0;  // into pairs or reserve
};

struct FilterOutcome {
  std::vector<FilterRecord> kept;  // exactly quota entries, pairs first then refills
  std::vector<FilterRecord> log;   // every pair that was scored, in scoring order
  std::size_t replacements = 0;
};

// Scores candidate `index` from the primary list (from_reserve = false) or the
// reserve. Lets callers load maps lazily.
using PairScorer = std::function<FilterRecord(bool from_reserve, std::size_t index)>;

// Keeps pairs with discrepancy <= threshold in input order until quota is met,
// then tops up from a seeded shuffle of the reserve, re-checking each
// replacement. Throws ReserveExhausted, DegenerateParam (quota > pair count).
FilterOutcome filter_and_refill(std::size_t pair_count, std::size_t reserve_count, const PairScorer& score,
                                double threshold, std::size_t quota, raster::Rng64& rng);
FilterOutcome filter_and_refill(const std::vector<DepthPair>& pairs, double threshold, std::size_t quota,
                                const std::vector<DepthPair>& reserve, raster::Rng64& rng);

// JSONL: header {"metric", "threshold"} then {image_id, a, b, discrepancy, kept}.
void write_rejection_log(const std::filesystem::path& path, const FilterOutcome& outcome, double threshold);

struct OverlapReport {
  std::vector<std::string> names;
  std::vector<std::vector<double>> jaccard;  // symmetric, names.size() square
  std::vector<std::pair<std::size_t, std::size_t>> flagged;  // i < j with jaccard < min_overlap
  double min_overlap = 0.95;
};

// Two empty sets count as identical.
double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);
OverlapReport overlap_report(const std::vector<std::pair<std::string, std::set<std::string>>>& datasets,
                             double min_overlap = 0.95);

// Source image ids referenced by a task manifest (sample ids are "<task>:<image_id>").
std::set<std::string> manifest_source_ids(const std::filesystem::path& manifest);

// 16-bit grayscale PNG or TensorDump ([H, W], [1, H, W] or [H, W, 1]).
// Throws NonFiniteDepth, MalformedTensor, MissingFile, IoFailure.
FloatMap read_depth_map(const std::filesystem::path& path);

}  // namespace proxyforge::depthfilter
