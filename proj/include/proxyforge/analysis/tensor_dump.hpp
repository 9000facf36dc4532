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
#include <span>
#include <vector>

namespace proxyforge::analysis {

// Dense float32 tensor, row-major.
struct Tensor {
  std::vector<std::uint64_t> dims;
  std::vector<float> data;

  std::size_t rank() const noexcept { return dims.size(); }
  std::uint64_t dim(std::size_t axis) const { return dims.at(axis); }
  friend bool operator==(const Tensor&, const Tensor&) = default;
};

Tensor make_tensor(std::vector<std::uint64_t> dims, std::vector<float> data);

// Binary layout: "SGTD", u32 version (1), u8 dtype (0 = f32), u8 ndim,
// u64 per dim, then the payload. Everything little-endian.
std::vector<std::uint8_t> encode_tensor_dump(const Tensor& t);
// Throws MalformedTensor on bad magic, version, dtype or length, and on
// non-finite data unless `allow_nonfinite` (callers with their own error).
Tensor decode_tensor_dump(std::span<const std::uint8_t> bytes, bool allow_nonfinite = false);

Tensor read_tensor_dump(const std::filesystem::path& path, bool allow_nonfinite = false);
void write_tensor_dump(const std::filesystem::path& path, const Tensor& t);

}  // namespace proxyforge::analysis
