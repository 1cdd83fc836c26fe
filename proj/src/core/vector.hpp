// Copyright 2026 The Medpair Authors.
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

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace medpair {

// Dense embedding. Vectors stored in an index are unit-length, so cosine
// similarity between two stored vectors is their dot product.
struct EmbeddingVector {
  std::vector<float> values;

  std::size_t dim() const { return values.size(); }

  bool AllFinite() const {
    for (float v : values) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

  double Norm() const {
    double sum = 0.0;
    for (float v : values) sum += static_cast<double>(v) * v;
    return std::sqrt(sum);
  }

  // Returns false for the zero vector, which is left unchanged.
  bool Normalize() {
    const double n = Norm();
    if (n == 0.0 || !std::isfinite(n)) return false;
    for (float& v : values) v = static_cast<float>(v / n);
    return true;
  }

  bool operator==(const EmbeddingVector&) const = default;
};

// Double-accumulated dot product in index order.
inline double Dot(std::span<const float> a, std::span<const float> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return sum;
}

}  // namespace medpair
