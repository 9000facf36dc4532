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
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "proxyforge/proxytasks/synth.hpp"
#include "proxyforge/proxytasks/task_kind.hpp"

namespace proxyforge::pipeline {

using proxytasks::TaskKind;

// Relative paths are resolved against the config file's directory.
struct IoPaths {
  std::string images;             // directory of source images
  std::string annotations;        // COCO-style JSON; optional
  std::string depth_primary;      // <image>.sgtd or <image>.png per image
  std::string depth_secondary;
  std::string restoration_pairs;  // JSONL {"id", "clean", "degraded", "kind"}
  std::string vqa;                // JSONL {"id", "path", "source"}
  std::string out = "out";
  friend bool operator==(const IoPaths&, const IoPaths&) = default;
};

struct TaskSettings {
  TaskKind kind = TaskKind::kReconstruction;
  std::uint64_t quota = 0;
  friend bool operator==(const TaskSettings&, const TaskSettings&) = default;
};

inline constexpr std::uint64_t kDefaultQuota = 20000;

struct PipelineConfig {
  std::uint64_t global_seed = 0;
  unsigned workers = 1;
  std::vector<TaskSettings> tasks;  // registry order
  std::vector<std::uint64_t> ratio{2, 1};  // SGT : VQA
  std::uint64_t batch_size = 60;
  double error_rate_cap = 0.0;
  double depth_threshold = 0.4;
  double overlap_min = 0.95;
  std::uint64_t mix_batches = 0;  // 0: enough batches to draw every SGT sample once
  std::vector<std::uint64_t> scaling_sizes;
  std::map<std::string, std::uint64_t> vqa_counts;  // declared, for planned data cards
  IoPaths io;
  proxytasks::SynthConfig synth;

  std::filesystem::path base_dir;  // not serialized

  std::uint64_t quota(TaskKind kind) const noexcept;
  void set_quota(TaskKind kind, std::uint64_t quota);
  std::filesystem::path resolve(const std::string& p) const;
  std::filesystem::path out_dir() const { return resolve(io.out); }

  // Everything but base_dir.
  bool same_settings(const PipelineConfig& other) const;
};

// Every task at 20k, 2:1 mixing at batch 60, threshold 0.4.
PipelineConfig default_config();

// Keys absent from the text keep their default_config() values. Unknown keys
// and out-of-range values throw InvalidConfig before any work starts.
PipelineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path);
std::string config_to_toml(const PipelineConfig& cfg);
void validate_config(const PipelineConfig& cfg);

}  // namespace proxyforge::pipeline
