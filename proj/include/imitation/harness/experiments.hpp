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

#include <string>
#include <vector>

#include "imitation/game/engine.hpp"
#include "imitation/harness/metrics.hpp"

namespace imitation {

/// One row of the experiment table: hidden widths, answer limits, whether
/// the interrogator may ask questions, and the equilibrium it should reach.
struct ExperimentSpec {
  int id = 1;
  std::string name;
  std::size_t hidden_interrogator = 8;
  std::size_t hidden_blue = 8;
  std::size_t hidden_red = 8;
  std::size_t answer_max_len_blue = 8;
  std::size_t answer_max_len_red = 8;
  std::size_t question_max_len = 0;
  Outcome expected = Outcome::pooling;

  bool operator==(const ExperimentSpec&) const = default;

  /// Copies this row's fields into `cfg`, leaving the rest alone.
  void apply(GameConfig& cfg) const {
    cfg.hidden_interrogator = hidden_interrogator;
    cfg.hidden_blue = hidden_blue;
    cfg.hidden_red = hidden_red;
    cfg.answer_max_len_blue = answer_max_len_blue;
    cfg.answer_max_len_red = answer_max_len_red;
    cfg.question_max_len = question_max_len;
  }
};

/// Question length used by the experiments that allow questioning.
inline constexpr std::size_t kQuestionLimit = 8;

inline std::vector<ExperimentSpec> builtin_experiments() {
  using enum Outcome;
  return {
      {1, "Identical", 8, 8, 8, 8, 8, 0, pooling},
      {2, "Handicap blue", 8, 8, 8, 6, 5, 0, separating},
      {3, "Handicap red", 8, 8, 8, 5, 6, 0, pooling},
      {4, "Neurons A blue", 8, 8, 4, 8, 8, kQuestionLimit, separating},
      {5, "Neurons A red", 8, 4, 8, 8, 8, kQuestionLimit, pooling},
      {6, "Neurons B blue", 8, 16, 8, 8, 8, kQuestionLimit, pooling},
      {7, "Neurons B red", 8, 8, 16, 8, 8, kQuestionLimit, pooling},
  };
}

inline ExperimentSpec builtin_experiment(int id) {
  for (auto& e : builtin_experiments()) {
    if (e.id == id) return e;
  }
  throw ConfigError("experiment id must be in 1..7, got " + std::to_string(id));
}

}  // namespace imitation
