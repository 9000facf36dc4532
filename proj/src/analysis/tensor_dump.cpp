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

#include "proxyforge/analysis/tensor_dump.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "proxyforge/error.hpp"

namespace proxyforge::analysis {
namespace {

constexpr std::uint8_t kMagic[4] = {'S', 'G', 'T', 'D'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 4 + 4 + 1 + 1;

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

template <typename T>
T get_le(const std::uint8_t* p) {
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(p[i]) << (8 * i);
  return v;
}

std::uint64_t element_count(const std::vector<std::uint64_t>& dims) {
  std::uint64_t n = 1;
  for (auto d : dims) {
    if (d != 0 && n > UINT64_MAX / d) fail(ErrorCode::kMalformedTensor, "tensor dims overflow");
    n *= d;
  }
  return n;
}

}  // namespace

Tensor make_tensor(std::vector<std::uint64_t> dims, std::vector<float> data) {
  if (dims.size() > 255) fail(ErrorCode::kMalformedTensor, "too many tensor dims");
  if (element_count(dims) != data.size()) fail(ErrorCode::kMalformedTensor, "tensor data does not match dims");
  return Tensor{std::move(dims), std::move(data)};
}

std::vector<std::uint8_t> encode_tensor_dump(const Tensor& t) {
  if (t.dims.size() > 255 || element_count(t.dims) != t.data.size()) {
    fail(ErrorCode::kMalformedTensor, "tensor data does not match dims");
  }
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  put_le(out, kVersion);
  out.push_back(0);
  out.push_back(static_cast<std::uint8_t>(t.dims.size()));
  for (auto d : t.dims) put_le(out, d);
  out.reserve(out.size() + t.data.size() * 4);
  for (float f : t.data) put_le(out, std::bit_cast<std::uint32_t>(f));
  return out;
}

Tensor decode_tensor_dump(std::span<const std::uint8_t> bytes, bool allow_nonfinite) {
  if (bytes.size() < kHeaderBytes || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    fail(ErrorCode::kMalformedTensor, "missing SGTD magic");
  }
  const auto version = get_le<std::uint32_t>(bytes.data() + 4);
  if (version != kVersion) fail(ErrorCode::kMalformedTensor, "unsupported tensor version " + std::to_string(version));
  if (bytes[8] != 0) fail(ErrorCode::kMalformedTensor, "unsupported dtype " + std::to_string(bytes[8]));
  const std::size_t ndim = bytes[9];
  if (bytes.size() < kHeaderBytes + 8 * ndim) fail(ErrorCode::kMalformedTensor, "truncated tensor header");
  Tensor t;
  for (std::size_t i = 0; i < ndim; ++i) t.dims.push_back(get_le<std::uint64_t>(bytes.data() + kHeaderBytes + 8 * i));
  const std::uint64_t n = element_count(t.dims);
  const std::size_t offset = kHeaderBytes + 8 * ndim;
  if (n > (bytes.size() - offset) / 4 || bytes.size() - offset != n * 4) {
    fail(ErrorCode::kMalformedTensor, "payload length does not match dims");
  }
  t.data.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    t.data[i] = std::bit_cast<float>(get_le<std::uint32_t>(bytes.data() + offset + 4 * i));
    if (!allow_nonfinite && !std::isfinite(t.data[i])) fail(ErrorCode::kMalformedTensor, "tensor contains non-finite values");
  }
  return t;
}

Tensor read_tensor_dump(const std::filesystem::path& path, bool allow_nonfinite) {
  if (!std::filesystem::exists(path)) fail(ErrorCode::kMissingFile, "no such file: " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoFailure, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_tensor_dump(bytes, allow_nonfinite);
}

void write_tensor_dump(const std::filesystem::path& path, const Tensor& t) {
  const auto bytes = encode_tensor_dump(t);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::kIoFailure, "cannot write " + path.string());
}

}  // namespace proxyforge::analysis
