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

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "imitation/nn/errors.hpp"
#include "imitation/nn/param.hpp"

namespace imitation::nn {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adam with bias-corrected moments. The state is bound to the shapes of the
/// parameter list it was created for; every update() must pass the same list.
class AdamState {
 public:
  AdamState() = default;
  AdamState(AdamConfig config, const ParamList& params) : config_(config) {
    if (config.learning_rate <= 0.0 || config.beta1 < 0.0 || config.beta1 >= 1.0 ||
        config.beta2 < 0.0 || config.beta2 >= 1.0 || config.epsilon <= 0.0) {
      throw ConfigError("Adam hyperparameters out of range");
    }
    for (const ParamTensor* p : params) {
      first_.emplace_back(p->size(), 0.0);
      second_.emplace_back(p->size(), 0.0);
    }
  }

  const AdamConfig& config() const { return config_; }
  std::uint64_t step() const { return step_; }
  const std::vector<std::vector<double>>& first_moments() const { return first_; }
  const std::vector<std::vector<double>>& second_moments() const { return second_; }

  /// One step on the gradients currently held by `params`; zeroes them after.
  void update(const ParamList& params) {
    if (params.size() != first_.size()) throw std::logic_error("Adam: parameter count changed");
    for (std::size_t k = 0; k < params.size(); ++k) {
      if (params[k]->size() != first_[k].size()) throw std::logic_error("Adam: parameter shape changed");
      require_finite(params[k]->grad(), "Adam gradient");
    }
    ++step_;
    const double t = static_cast<double>(step_);
    const double c1 = 1.0 - std::pow(config_.beta1, t);
    const double c2 = 1.0 - std::pow(config_.beta2, t);
    for (std::size_t k = 0; k < params.size(); ++k) {
      auto values = params[k]->values();
      auto grad = params[k]->grad();
      auto& m = first_[k];
      auto& v = second_[k];
      for (std::size_t i = 0; i < values.size(); ++i) {
        const double g = grad[i];
        m[i] = config_.beta1 * m[i] + (1.0 - config_.beta1) * g;
        v[i] = config_.beta2 * v[i] + (1.0 - config_.beta2) * g * g;
        values[i] -= config_.learning_rate * (m[i] / c1) / (std::sqrt(v[i] / c2) + config_.epsilon);
      }
      params[k]->zero_grad();
    }
  }

 private:
  AdamConfig config_;
  std::vector<std::vector<double>> first_;
  std::vector<std::vector<double>> second_;
  std::uint64_t step_ = 0;
};

}  // namespace imitation::nn
