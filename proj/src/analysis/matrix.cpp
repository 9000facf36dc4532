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

#include "proxyforge/analysis/matrix.hpp"

#include "proxyforge/error.hpp"

namespace proxyforge::analysis {

Matrix matrix_from_tensor(const Tensor& t) {
  if (t.dims.empty()) fail(ErrorCode::kMalformedTensor, "scalar tensor cannot be a matrix");
  Matrix m;
  m.rows = t.dims[0];
  m.cols = m.rows == 0 ? 0 : t.data.size() / m.rows;
  m.data.assign(t.data.begin(), t.data.end());
  return m;
}

Tensor tensor_from_matrix(const Matrix& m) {
  return make_tensor({m.rows, m.cols}, std::vector<float>(m.data.begin(), m.data.end()));
}

}  // namespace proxyforge::analysis
