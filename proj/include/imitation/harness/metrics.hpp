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
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>

#include "imitation/game/engine.hpp"

namespace imitation {

/// Per-iteration statistics over the rounds played in that iteration.
/// `reward_interrogator` doubles as the per-round full-correct rate.
struct MetricsRow {
  std::uint64_t iteration = 0;
  double accuracy = 0.0;
  double accuracy_blue = 0.0;
  double accuracy_red = 0.0;
  double reward_interrogator = 0.0;
  double reward_blue = 0.0;
  double reward_red = 0.0;
  double entropy_blue = 0.0;
  double entropy_red = 0.0;
  double mutual_information = 0.0;

  bool operator==(const MetricsRow&) const = default;
};

namespace detail {

inline double plugin_entropy(const std::map<Message, std::size_t>& counts, std::size_t total) {
  double h = 0.0;
  for (const auto& [msg, c] : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return std::max(0.0, h);
}

}  // namespace detail

/// Plug-in entropy (bits) of one type's answers, each message an atom.
inline double answer_entropy(std::span<const InteractionRecord> records, AgentType type) {
  if (records.empty()) return 0.0;
  std::map<Message, std::size_t> counts;
  for (const auto& r : records) ++counts[r.answer_of(type)];
  return detail::plugin_entropy(counts, records.size());
}

/// Plug-in mutual information (bits) between the true source and the answer
/// message, I = H(M) - H(M | type). Bounded by min(H(type), H(M)) <= 1.
inline double mutual_information(std::span<const InteractionRecord> records) {
  if (records.empty()) return 0.0;
  std::map<Message, std::size_t> all;
  for (const auto& r : records) {
    ++all[r.answers[0]];
    ++all[r.answers[1]];
  }
  const double h_m = detail::plugin_entropy(all, 2 * records.size());
  // Each round has one answer of each type, so P(type) = 1/2 exactly.
  const double h_m_given_t =
      0.5 * (answer_entropy(records, AgentType::blue) + answer_entropy(records, AgentType::red));
  return std::clamp(h_m - h_m_given_t, 0.0, std::min(1.0, h_m));
}

inline MetricsRow compute_metrics(std::span<const InteractionRecord> records, std::uint64_t iteration) {
  MetricsRow m;
  m.iteration = iteration;
  if (records.empty()) return m;
  double correct = 0, blue_ok = 0, red_ok = 0, ri = 0, rb = 0, rr = 0;
  for (const auto& r : records) {
    correct += static_cast<double>(r.correct_count());
    blue_ok += r.inferred[r.slot_of(AgentType::blue)] == AgentType::blue ? 1 : 0;
    red_ok += r.inferred[r.slot_of(AgentType::red)] == AgentType::red ? 1 : 0;
    ri += r.rewards.interrogator;
    rb += r.rewards.blue;
    rr += r.rewards.red;
  }
  const double n = static_cast<double>(records.size());
  m.accuracy = correct / (2.0 * n);
  m.accuracy_blue = blue_ok / n;
  m.accuracy_red = red_ok / n;
  m.reward_interrogator = ri / n;
  m.reward_blue = rb / n;
  m.reward_red = rr / n;
  m.entropy_blue = answer_entropy(records, AgentType::blue);
  m.entropy_red = answer_entropy(records, AgentType::red);
  m.mutual_information = mutual_information(records);
  return m;
}

/// Records from the final ceil(window * T) iterations, T being the number of
/// iterations in the log.
inline std::span<const InteractionRecord> final_window(const PublicLog& log, double window) {
  if (!(window > 0.0 && window <= 1.0)) throw InputError("window must lie in (0, 1]");
  if (log.empty()) throw InputError("window of an empty log");
  const std::uint64_t total = log.iteration_count();
  const auto span_iters = static_cast<std::uint64_t>(std::ceil(window * static_cast<double>(total)));
  const std::uint64_t last = log.records().back().iteration;
  return log.since(last + 1 - std::min(span_iters, total));
}

/// Mean per-message accuracy over the final window of iterations.
inline double accuracy_window(const PublicLog& log, double window) {
  const auto recs = final_window(log, window);
  double correct = 0.0;
  for (const auto& r : recs) correct += static_cast<double>(r.correct_count());
  return correct / (2.0 * static_cast<double>(recs.size()));
}

enum class Outcome { pooling, separating, undetermined };

inline constexpr std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::pooling: return "pooling";
    case Outcome::separating: return "separating";
    case Outcome::undetermined: return "undetermined";
  }
  return "undetermined";
}

inline Outcome outcome_from_string(std::string_view s) {
  if (s == "pooling") return Outcome::pooling;
  if (s == "separating") return Outcome::separating;
  if (s == "undetermined") return Outcome::undetermined;
  throw InputError("unknown outcome '" + std::string(s) + "'");
}

inline constexpr double kSeparatingThreshold = 0.80;
inline constexpr double kPoolingThreshold = 0.65;

struct EquilibriumLabel {
  Outcome outcome = Outcome::undetermined;
  double accuracy = 0.0;
};

/// separating at >= 0.80, pooling at <= 0.65, undetermined in between.
inline EquilibriumLabel classify_equilibrium(double accuracy) {
  if (!(accuracy >= 0.0 && accuracy <= 1.0)) throw InputError("accuracy must lie in [0, 1]");
  Outcome o = Outcome::undetermined;
  if (accuracy >= kSeparatingThreshold) o = Outcome::separating;
  else if (accuracy <= kPoolingThreshold) o = Outcome::pooling;
  return {o, accuracy};
}

}  // namespace imitation
