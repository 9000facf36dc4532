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
#include <optional>
#include <string>
#include <string_view>

#include "proxyforge/proxytasks/params.hpp"
#include "proxyforge/proxytasks/task_kind.hpp"

namespace proxyforge::proxytasks {

// One forged pair as it appears in a manifest. Paths are relative to the
// output root so manifests stay byte-identical across machines.
struct TrainingSample {
  std::string sample_id;
  TaskKind task = TaskKind::kReconstruction;
  std::string instruction;
  std::optional<std::string> input_path;  // absent when the source image is the condition
  std::string target_path;
  std::uint64_t seed = 0;
  DegradationParams params;
  friend bool operator==(const TrainingSample&, const TrainingSample&) = default;
};

// "<task>:<image_id>".
std::string make_sample_id(TaskKind task, std::string_view image_id);
// Image id part of a sample id. Throws InvalidConfig when there is no task prefix.
std::string source_id_of(std::string_view sample_id);
// Task part of a sample id. Throws InvalidConfig.
TaskKind task_of(std::string_view sample_id);

// Manifest row fields up to (not including) stream/batch/pos.
Json sample_to_json(const TrainingSample& s);
TrainingSample sample_from_json(const Json& j);

}  // namespace proxyforge::proxytasks
