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

#include <string>
#include <vector>

#include "proxyforge/analysis/matrix.hpp"

namespace proxyforge::analysis {

// "index,x,y[,label]" rows.
std::string points_csv(const Matrix& points, const std::vector<std::string>& labels = {});
std::string kl_trace_csv(const std::vector<double>& trace);
std::string matrix_csv(const Matrix& m);
// Standalone SVG scatter; points colored by label when labels are given.
std::string scatter_svg(const Matrix& points, const std::vector<std::string>& labels = {}, int size = 640);

}  // namespace proxyforge::analysis
