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

#include <filesystem>
#include <string>
#include <vector>

#include "proxyforge/depthfilter/depth_filter.hpp"
#include "proxyforge/error.hpp"
#include "proxyforge/mixer/mixer.hpp"
#include "proxyforge/pipeline/config.hpp"
#include "proxyforge/pipeline/corpus.hpp"
#include "proxyforge/proxytasks/sample.hpp"

namespace proxyforge::pipeline {

struct SampleError {
  std::string sample_id;
  ErrorCode code = ErrorCode::kIoFailure;
  std::string message;
};

struct TaskRun {
  TaskKind kind = TaskKind::kReconstruction;
  std::vector<proxytasks::TrainingSample> samples;  // sorted by sample_id
};

struct ForgeResult {
  std::vector<TaskRun> tasks;
  std::vector<SampleError> errors;  // in job order
  std::size_t jobs = 0;
  std::size_t depth_replacements = 0;
  depthfilter::OverlapReport overlap;
  bool failed = false;       // error rate above the cap
  bool io_failure = false;   // at least one error was an I/O error
};

// Output layout under cfg.out_dir():
//   images/<id>.png                 source images used by any task
//   <task>/{inputs,targets}/<id>.png
//   <task>/manifest.jsonl           rows sorted by sample_id
//   depth/rejections.jsonl          depth filter log
//   overlap.json, errors.jsonl
// Validation problems throw before any sample is synthesized.
ForgeResult forge(const PipelineConfig& cfg);

// Tasks with quota > 0 that draw from the shared image corpus (everything but
// externally paired restoration).
std::vector<TaskKind> corpus_tasks(const PipelineConfig& cfg);

struct DepthSelection {
  std::vector<std::size_t> images;  // corpus indices, kept order
  depthfilter::FilterOutcome outcome;
};

// Runs the dual-estimate consistency filter for the depth quota: candidates
// are the first `quota` images of the corpus order, the rest is the reserve.
DepthSelection select_depth_images(const PipelineConfig& cfg, const Corpus& corpus,
                                   const std::vector<std::size_t>& order);

struct ReplayResult {
  std::string sample_id;
  bool from_params = false;  // recorded params reproduce the files on disk
  bool from_seed = false;    // recorded seed reproduces the files on disk
  std::string detail;
  bool ok() const noexcept { return from_params && from_seed; }
};

// Regenerates one manifest row and compares it byte-exactly with the forged
// PNGs. Throws InvalidConfig when the sample is not in the task manifest.
ReplayResult replay_sample(const PipelineConfig& cfg, const std::string& sample_id);

struct FilterDepthResult {
  std::filesystem::path log;
  std::size_t kept = 0;
  std::size_t rejected = 0;
  std::size_t replacements = 0;
};
// Standalone filter run writing depth_filter/{rejections.jsonl,kept.txt}.
FilterDepthResult filter_depth(const PipelineConfig& cfg);

struct MixResult {
  std::filesystem::path manifest;
  std::uint64_t batches = 0;
  std::uint64_t sgt_rows = 0;
  std::uint64_t vqa_rows = 0;
  std::vector<std::filesystem::path> slices;
};
// Reads the per-task manifests and writes mix/manifest.jsonl, mix/epochs.jsonl
// and mix/scaling_<n>.jsonl.
MixResult mix(const PipelineConfig& cfg);

// From files under the output directory (the mixed manifest when present,
// otherwise the per-task manifests) or, with `planned`, from the config.
mixer::DataCard stats(const PipelineConfig& cfg, bool planned);

mixer::ManifestHeader manifest_header(const PipelineConfig& cfg);

}  // namespace proxyforge::pipeline
