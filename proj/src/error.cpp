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

#include "proxyforge/error.hpp"

namespace proxyforge {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kMalformedAnnotation: return "MalformedAnnotation";
    case ErrorCode::kUnknownImage: return "UnknownImage";
    case ErrorCode::kMaskShapeMismatch: return "MaskShapeMismatch";
    case ErrorCode::kRleLengthMismatch: return "RleLengthMismatch";
    case ErrorCode::kDegeneratePolygon: return "DegeneratePolygon";
    case ErrorCode::kPaletteOverflow: return "PaletteOverflow";
    case ErrorCode::kDegenerateParam: return "DegenerateParam";
    case ErrorCode::kNonFiniteDepth: return "NonFiniteDepth";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kReserveExhausted: return "ReserveExhausted";
    case ErrorCode::kEmptyStream: return "EmptyStream";
    case ErrorCode::kRankDeficient: return "RankDeficient";
    case ErrorCode::kPerplexityInfeasible: return "PerplexityInfeasible";
    case ErrorCode::kHeadMismatch: return "HeadMismatch";
    case ErrorCode::kCategoryGap: return "CategoryGap";
    case ErrorCode::kMalformedTensor: return "MalformedTensor";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kMissingFile: return "MissingFile";
  }
  return "Unknown";
}

bool is_io_error(ErrorCode code) noexcept {
  return code == ErrorCode::kIoFailure || code == ErrorCode::kMissingFile;
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code) {}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace proxyforge
