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

#include "proxyforge/proxytasks/task_kind.hpp"

#include <array>

namespace proxyforge::proxytasks {
namespace {

struct TaskInfo {
  TaskKind kind;
  std::string_view name;
  TaskLevel level;
  std::string_view instruction;
};

constexpr std::array<TaskInfo, 13> kTasks = {{
    {TaskKind::kSemanticSeg, "semantic_seg", TaskLevel::kHigh,
     "Segment the image by assigning every pixel its semantic category color."},
    {TaskKind::kInstanceSeg, "instance_seg", TaskLevel::kHigh,
     "Segment each distinct object instance in the image with its own color."},
    {TaskKind::kPanopticSeg, "panoptic_seg", TaskLevel::kHigh,
     "Segment the image into panoptic regions."},
    {TaskKind::kDetection, "detection", TaskLevel::kHigh,
     "Draw a labeled bounding box around every object in the image."},
    {TaskKind::kDepth, "depth", TaskLevel::kMid,
     "Estimate the relative depth of the scene as a grayscale map."},
    {TaskKind::kInpainting, "inpainting", TaskLevel::kMid,
     "Fill in the missing regions of the image."},
    {TaskKind::kEdge, "edge", TaskLevel::kLow,
     "Detect the edges in the image."},
    {TaskKind::kIsr, "isr", TaskLevel::kLow,
     "Restore the high-resolution details of the image."},
    {TaskKind::kDeblur, "deblur", TaskLevel::kLow,
     "Remove the motion blur from the image."},
    {TaskKind::kLowLight, "lowlight", TaskLevel::kLow,
     "Enhance the brightness of this underexposed image."},
    {TaskKind::kDenoise, "denoise", TaskLevel::kLow,
     "Remove the noise and compression artifacts from the image."},
    {TaskKind::kDerainDehaze, "derain_dehaze", TaskLevel::kLow,
     "Remove the rain or haze from the image."},
    {TaskKind::kReconstruction, "reconstruction", TaskLevel::kLow,
     "Reconstruct the input image."},
}};

constexpr std::array<TaskKind, 13> kAll = [] {
  std::array<TaskKind, 13> out{};
  for (std::size_t i = 0; i < kTasks.size(); ++i) out[i] = kTasks[i].kind;
  return out;
}();

const TaskInfo& info(TaskKind task) noexcept {
  return kTasks[static_cast<std::size_t>(task) - 1];
}

}  // namespace

std::span<const TaskKind> all_tasks() noexcept { return kAll; }

TaskLevel level_of(TaskKind task) noexcept { return info(task).level; }

std::string_view level_name(TaskLevel level) noexcept {
  switch (level) {
    case TaskLevel::kHigh: return "high";
    case TaskLevel::kMid: return "mid";
    case TaskLevel::kLow: return "low";
  }
  return "low";
}

std::string_view task_name(TaskKind task) noexcept { return info(task).name; }

std::optional<TaskKind> task_from_name(std::string_view name) noexcept {
  for (const TaskInfo& t : kTasks)
    if (t.name == name) return t.kind;
  return std::nullopt;
}

std::string_view instruction_for(TaskKind task) noexcept { return info(task).instruction; }

bool needs_annotations(TaskKind task) noexcept {
  return task == TaskKind::kSemanticSeg || task == TaskKind::kInstanceSeg ||
         task == TaskKind::kPanopticSeg || task == TaskKind::kDetection;
}

}  // namespace proxyforge::proxytasks
