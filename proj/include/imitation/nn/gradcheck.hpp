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
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "imitation/nn/param.hpp"
#include "imitation/nn/tape.hpp"

namespace imitation::nn {

struct GradCheckReport {
  double max_relative_error = 0.0;
  std::size_t entries_checked = 0;
  std::size_t worst_tensor = 0;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;

  bool passed(double tol) const { return max_relative_error < tol; }
};

/// Differences below this magnitude are measured against it instead of
/// against the (tiny) gradient itself, so round-off in f(x+eps)-f(x-eps)
/// does not read as relative error.
inline constexpr double kGradCheckFloor = 1e-5;

inline double relative_error(double analytic, double numeric) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), kGradCheckFloor});
  return std::abs(analytic - numeric) / scale;
}

/// Compares backward() gradients of a scalar loss with central differences
/// (f(t + eps) - f(t - eps)) / 2eps for every entry of every tensor in
/// `params`. `loss_fn(Tape&) -> Var` must be deterministic.
template <class LossFn>
GradCheckReport grad_check(const ParamList& params, LossFn&& loss_fn, double eps = 1e-5) {
  zero_grads(params);
  {
    Tape tape;
    tape.backward(loss_fn(tape));
  }
  std::vector<std::vector<double>> analytic;
  for (const ParamTensor* p : params) analytic.emplace_back(p->grad().begin(), p->grad().end());
  zero_grads(params);

  auto eval = [&] {
    Tape tape;
    return tape.scalar_value(loss_fn(tape));
  };

  GradCheckReport report;
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto values = params[k]->values();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double saved = values[i];
      values[i] = saved + eps;
      const double up = eval();
      values[i] = saved - eps;
      const double down = eval();
      values[i] = saved;
      const double numeric = (up - down) / (2.0 * eps);
      const double err = relative_error(analytic[k][i], numeric);
      ++report.entries_checked;
      if (err > report.max_relative_error) {
        report.max_relative_error = err;
        report.worst_tensor = k;
        report.worst_index = i;
        report.worst_analytic = analytic[k][i];
        report.worst_numeric = numeric;
      }
    }
  }
  return report;
}

}  // namespace imitation::nn
