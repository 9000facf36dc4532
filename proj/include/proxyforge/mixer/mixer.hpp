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
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "proxyforge/proxytasks/sample.hpp"

namespace proxyforge::mixer {

// Largest-remainder apportionment of `total` seats to `weights`. Ties go to
// the lower index. Exact integer arithmetic.
std::vector<std::uint64_t> largest_remainder(std::uint64_t total, std::span<const std::uint64_t> weights);

// Seats per stream in batch `batch_index` (0-based): the difference between
// consecutive cumulative apportionments, so any window of whole periods is
// exactly in ratio.
std::vector<std::uint64_t> batch_counts(std::uint64_t batch_index, std::uint64_t batch_size,
                                        std::span<const std::uint64_t> weights);

struct StreamSpec {
  std::string name;
  std::uint64_t size = 0;    // items available
  std::uint64_t weight = 0;  // ratio share
};

struct BatchEntry {
  std::size_t stream = 0;
  std::uint64_t item = 0;  // index into the stream
  std::uint64_t epoch = 0;
  friend bool operator==(const BatchEntry&, const BatchEntry&) = default;
};

struct BatchPlan {
  std::uint64_t batch_index = 0;
  std::vector<BatchEntry> entries;     // stream-major, each stream in permutation order
  std::vector<std::uint64_t> counts;   // per stream
  friend bool operator==(const BatchPlan&, const BatchPlan&) = default;
};

struct EpochBoundary {
  std::size_t stream = 0;
  std::uint64_t epoch = 0;  // epoch that starts here
  std::uint64_t batch_index = 0;
  std::uint64_t pos = 0;    // position within the batch
};

// Unbounded batch stream over n weighted item streams. Each stream is walked
// in a seeded permutation; on exhaustion it is reshuffled with a fresh
// sub-seed. Throws EmptyStream, DegenerateParam.
class BatchPlanner {
 public:
  BatchPlanner(std::vector<StreamSpec> streams, std::uint64_t batch_size, std::uint64_t seed);

  BatchPlan next();
  const std::vector<EpochBoundary>& boundaries() const noexcept { return boundaries_; }
  const std::vector<StreamSpec>& streams() const noexcept { return streams_; }

 private:
  struct Cursor {
    std::vector<std::uint64_t> order;
    std::uint64_t pos = 0;
    std::uint64_t epoch = 0;
  };
  void reshuffle(std::size_t s);

  std::vector<StreamSpec> streams_;
  std::vector<std::uint64_t> weights_;
  std::uint64_t batch_size_;
  std::uint64_t seed_;
  std::uint64_t next_batch_ = 0;
  std::vector<Cursor> cursors_;
  std::vector<EpochBoundary> boundaries_;
};

// Two-stream convenience: SGT then VQA at p:q.
std::vector<BatchPlan> plan_batches(std::uint64_t sgt_count, std::uint64_t vqa_count, std::uint64_t p,
                                    std::uint64_t q, std::uint64_t batch_size, std::uint64_t seed,
                                    std::uint64_t batch_count);

// Fewest batches that draw every item of stream `s` at least once.
std::uint64_t batches_to_cover(std::span<const std::uint64_t> weights, std::uint64_t batch_size, std::size_t s,
                               std::uint64_t items);

// Prefixes of one seeded permutation of [0, n). Throws DegenerateParam when a
// size exceeds n.
std::vector<std::vector<std::uint64_t>> slice_scaling(std::uint64_t n, std::span<const std::uint64_t> sizes,
                                                      std::uint64_t seed);

// --- manifests --------------------------------------------------------------

inline constexpr int kSchemaVersion = 1;

inline constexpr std::array<std::string_view, 5> kVqaSources = {"General", "Doc/Chart/Screen", "Math/Reasoning",
                                                                "General OCR", "Language"};

// Opaque understanding-data reference. Content is never opened.
struct VqaRef {
  std::string sample_id;
  std::string path;
  std::string source;  // one of kVqaSources
  friend bool operator==(const VqaRef&, const VqaRef&) = default;
};

struct ManifestHeader {
  std::uint64_t global_seed = 0;
  std::vector<std::uint64_t> ratio;
  std::uint64_t batch_size = 0;
  std::vector<std::pair<std::string, std::uint64_t>> task_quotas;
};

struct ManifestRow {
  std::variant<proxytasks::TrainingSample, VqaRef> item;
  std::string stream;  // "sgt" or "vqa"; empty for per-task manifests
  std::uint64_t batch = 0;
  std::uint64_t pos = 0;
};

std::string render_header(const ManifestHeader& header);
std::string render_row(const ManifestRow& row);

// Writes header + rows as JSONL through a temp file, fsync and rename. When
// `data_root` is non-empty every SGT input/target path must exist under it
// (MissingFile). Throws IoFailure.
std::filesystem::path write_manifest(const std::filesystem::path& path, const ManifestHeader& header,
                                     std::span<const ManifestRow> rows,
                                     const std::filesystem::path& data_root = {});

// Rows for a planned mix: SGT stream 0, VQA stream 1.
std::vector<ManifestRow> rows_from_plan(std::span<const BatchPlan> plans,
                                        std::span<const proxytasks::TrainingSample> sgt,
                                        std::span<const VqaRef> vqa);

// Reads a JSONL manifest back (header discarded). Throws InvalidConfig, MissingFile.
std::vector<proxytasks::TrainingSample> read_task_manifest(const std::filesystem::path& path);
// VQA list: JSONL {"id", "path", "source"}. Throws InvalidConfig, MissingFile.
std::vector<VqaRef> read_vqa_list(const std::filesystem::path& path);

// --- data card --------------------------------------------------------------

struct DataCard {
  // SGT first, then kVqaSources in order.
  std::vector<std::pair<std::string, std::uint64_t>> sources;
  std::map<std::string, std::uint64_t> per_task;
};

DataCard empty_data_card();
// Counts distinct sample ids of the given manifests by source.
DataCard data_card(std::span<const std::filesystem::path> manifests);
// Counts implied by a configuration rather than by files on disk.
DataCard planned_data_card(std::span<const std::pair<std::string, std::uint64_t>> task_quotas,
                           const std::map<std::string, std::uint64_t>& vqa_counts);
// Below 1000 the plain number; "190k" for whole thousands, else one decimal ("1.2k").
std::string short_count(std::uint64_t n);
// Two-line markdown-ish table in the layout "Data Source | SGT | General | ...".
std::string render_data_card(const DataCard& card);
std::string data_card_csv(const DataCard& card);

}  // namespace proxyforge::mixer
