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
#include <span>
#include <string_view>

namespace proxyforge::proxytasks {

// The numeric value doubles as the task code mixed into per-sample seeds.
enum class TaskKind : std::uint16_t {
  kSemanticSeg = 1,
  kInstanceSeg,
  kPanopticSeg,
  kDetection,
  kDepth,
  kInpainting,
  kEdge,
  kIsr,
  kDeblur,
  kLowLight,
  kDenoise,
  kDerainDehaze,
  kReconstruction,
};

enum class TaskLevel { kHigh, kMid, kLow };

std::span<const TaskKind> all_tasks() noexcept;

TaskLevel level_of(TaskKind task) noexcept;
std::string_view level_name(TaskLevel level) noexcept;

// Stable snake_case identifier used in sample ids, paths and manifests.
std::string_view task_name(TaskKind task) noexcept;
std::optional<TaskKind> task_from_name(std::string_view name) noexcept;

constexpr std::uint16_t task_code(TaskKind task) noexcept { return static_cast<std::uint16_t>(task); }

// Fixed one-sentence instruction per task. These are placeholder phrasings;
// they carry no image-specific content.
std::string_view instruction_for(TaskKind task) noexcept;

// Tasks whose target is derived from COCO-style annotations.
bool needs_annotations(TaskKind task) noexcept;

}  // namespace proxyforge::proxytasks
