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

#include "proxyforge/proxytasks/sample.hpp"

#include "proxyforge/error.hpp"

namespace proxyforge::proxytasks {

std::string make_sample_id(TaskKind task, std::string_view image_id) {
  std::string id(task_name(task));
  id += ':';
  id += image_id;
  return id;
}

std::string source_id_of(std::string_view sample_id) {
  const auto colon = sample_id.find(':');
  if (colon == std::string_view::npos) fail(ErrorCode::kInvalidConfig, "sample id without task prefix: " + std::string(sample_id));
  return std::string(sample_id.substr(colon + 1));
}

TaskKind task_of(std::string_view sample_id) {
  const auto colon = sample_id.find(':');
  const auto task = task_from_name(sample_id.substr(0, colon));
  if (colon == std::string_view::npos || !task) {
    fail(ErrorCode::kInvalidConfig, "sample id without task prefix: " + std::string(sample_id));
  }
  return *task;
}

Json sample_to_json(const TrainingSample& s) {
  Json j;
  j["sample_id"] = s.sample_id;
  j["task"] = task_name(s.task);
  j["level"] = level_name(level_of(s.task));
  j["instruction"] = s.instruction;
  j["input"] = s.input_path ? Json(*s.input_path) : Json(nullptr);
  j["target"] = s.target_path;
  j["seed"] = s.seed;
  j["params"] = params_to_json(s.params);
  return j;
}

TrainingSample sample_from_json(const Json& j) {
  try {
    TrainingSample s;
    s.sample_id = j.at("sample_id").get<std::string>();
    const auto task = task_from_name(j.at("task").get<std::string>());
    if (!task) fail(ErrorCode::kInvalidConfig, "unknown task in manifest row");
    s.task = *task;
    s.instruction = j.at("instruction").get<std::string>();
    if (!j.at("input").is_null()) s.input_path = j.at("input").get<std::string>();
    s.target_path = j.at("target").get<std::string>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.params = params_from_json(s.task, j.at("params"));
    return s;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kInvalidConfig, std::string("bad manifest row: ") + e.what());
  }
}

}  // namespace proxyforge::proxytasks
