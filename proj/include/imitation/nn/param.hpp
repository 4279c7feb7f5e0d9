// Copyright 2026 The Imitation Game Authors.
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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <vector>

#include "imitation/nn/errors.hpp"
#include "imitation/nn/rng.hpp"

namespace imitation::nn {

/// Dense row-major matrix (or column vector when cols == 1) of learnable
/// reals together with its gradient accumulator. Both buffers always have
/// the same shape.
class ParamTensor {
 public:
  ParamTensor() = default;
  ParamTensor(std::size_t rows, std::size_t cols = 1)
      : rows_(rows), cols_(cols), values_(rows * cols, 0.0), grad_(rows * cols, 0.0) {
    if (rows == 0 || cols == 0) throw ConfigError("ParamTensor needs positive dimensions");
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return values_.size(); }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::span<double> grad() { return grad_; }
  std::span<const double> grad() const { return grad_; }

  double& operator()(std::size_t r, std::size_t c = 0) { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c = 0) const { return values_[r * cols_ + c]; }

  void zero_grad() { std::fill(grad_.begin(), grad_.end(), 0.0); }

  void fill_uniform(Rng& rng, double bound) {
    for (double& v : values_) v = uniform(rng, -bound, bound);
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
  std::vector<double> grad_;
};

using ParamList = std::vector<ParamTensor*>;

inline void zero_grads(const ParamList& params) {
  for (ParamTensor* p : params) p->zero_grad();
}

/// Order-sensitive FNV-1a hash over the raw bits of every value; used to
/// assert that a training stage left a parameter group untouched.
inline std::uint64_t checksum(const ParamList& params) {
  std::uint64_t h = 1469598103934665603ull;
  for (const ParamTensor* p : params) {
    for (double v : p->values()) {
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      for (int i = 0; i < 8; ++i) {
        h ^= (bits >> (8 * i)) & 0xffu;
        h *= 1099511628211ull;
      }
    }
  }
  return h;
}

}  // namespace imitation::nn
