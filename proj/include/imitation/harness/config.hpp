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

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "imitation/harness/experiments.hpp"
#include "imitation/training/trainer.hpp"

namespace imitation {

/// Everything that determines a run. Two runs with equal RunConfig produce
/// byte-identical metrics and transcripts.
struct RunConfig {
  ExperimentSpec experiment = builtin_experiment(1);
  GameConfig game{};
  TrainingConfig training{};
  std::uint64_t seed = 1;
  double window = 0.2;
};

/// Learning rates used by the experiment harness. Critics and the
/// discriminator move faster than the actors they evaluate.
inline constexpr double kHarnessActorLr = 1e-3;
inline constexpr double kHarnessCriticLr = 1e-2;
inline constexpr double kHarnessDiscriminatorLr = 1e-3;

inline RunConfig make_run_config(int experiment_id, std::uint64_t seed) {
  RunConfig rc;
  rc.experiment = builtin_experiment(experiment_id);
  rc.experiment.apply(rc.game);
  rc.training.actor.learning_rate = kHarnessActorLr;
  rc.training.critic.learning_rate = kHarnessCriticLr;
  rc.training.discriminator.learning_rate = kHarnessDiscriminatorLr;
  rc.seed = seed;
  return rc;
}

// Config file schema: one `key = value` per line, `#` starts a comment.
//
//   alphabet_size          ordinary symbols (EOS is added)      size
//   question_max_len       interrogator question limit          size
//   answer_max_len_blue    blue answer limit                    size
//   answer_max_len_red     red answer limit                     size
//   hidden_interrogator    interrogator hidden units            size
//   hidden_blue            blue hidden units                    size
//   hidden_red             red hidden units                     size
//   batch_size             rounds per iteration (N)             size
//   iterations             training iterations (T)              size
//   actor_lr               Adam learning rate, all actors       real
//   critic_lr              Adam learning rate, all critics      real
//   discriminator_lr       Adam learning rate, discriminator    real
//   adam_beta1, adam_beta2, adam_epsilon   shared by every group  real
//   discriminator_target   true_type | literal
//   window                 final fraction used for the verdict  real in (0,1]
//   expected_outcome       pooling | separating | undetermined
//   seed                   u64
//
// Keys not listed are rejected.

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::size_t parse_size(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  unsigned long long x = 0;
  try {
    x = std::stoull(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || v.empty() || v[0] == '-') throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
  return static_cast<std::size_t>(x);
}

inline double parse_real(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double x = 0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || v.empty()) throw ConfigError(key + ": expected a number, got '" + v + "'");
  return x;
}

}  // namespace detail

/// Applies `key = value` overrides from `text` on top of `rc`.
inline void apply_config_text(const std::string& text, RunConfig& rc) {
  using Setter = std::function<void(const std::string&, const std::string&)>;
  auto size_field = [](std::size_t& f) -> Setter {
    return [&f](const std::string& k, const std::string& v) { f = detail::parse_size(k, v); };
  };
  auto real_field = [](double& f) -> Setter {
    return [&f](const std::string& k, const std::string& v) { f = detail::parse_real(k, v); };
  };
  GameConfig& g = rc.game;
  TrainingConfig& t = rc.training;
  const std::map<std::string, Setter> setters = {
      {"alphabet_size", size_field(g.alphabet_size)},
      {"question_max_len", size_field(g.question_max_len)},
      {"answer_max_len_blue", size_field(g.answer_max_len_blue)},
      {"answer_max_len_red", size_field(g.answer_max_len_red)},
      {"hidden_interrogator", size_field(g.hidden_interrogator)},
      {"hidden_blue", size_field(g.hidden_blue)},
      {"hidden_red", size_field(g.hidden_red)},
      {"batch_size", size_field(g.batch_size)},
      {"iterations", size_field(g.iterations)},
      {"actor_lr", real_field(t.actor.learning_rate)},
      {"critic_lr", real_field(t.critic.learning_rate)},
      {"discriminator_lr", real_field(t.discriminator.learning_rate)},
      {"adam_beta1", [&t](const std::string& k, const std::string& v) {
         t.actor.beta1 = t.critic.beta1 = t.discriminator.beta1 = detail::parse_real(k, v);
       }},
      {"adam_beta2", [&t](const std::string& k, const std::string& v) {
         t.actor.beta2 = t.critic.beta2 = t.discriminator.beta2 = detail::parse_real(k, v);
       }},
      {"adam_epsilon", [&t](const std::string& k, const std::string& v) {
         t.actor.epsilon = t.critic.epsilon = t.discriminator.epsilon = detail::parse_real(k, v);
       }},
      {"discriminator_target", [&t](const std::string& k, const std::string& v) {
         if (v == "true_type") t.discriminator_target = DiscriminatorTarget::true_type;
         else if (v == "literal") t.discriminator_target = DiscriminatorTarget::literal;
         else throw ConfigError(k + ": expected true_type or literal, got '" + v + "'");
       }},
      {"window", real_field(rc.window)},
      {"expected_outcome", [&rc](const std::string&, const std::string& v) {
         rc.experiment.expected = outcome_from_string(v);
       }},
      {"seed", [&rc](const std::string& k, const std::string& v) { rc.seed = detail::parse_size(k, v); }},
  };

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    it->second(key, value);
  }
  rc.game.validate();
  if (!(rc.window > 0.0 && rc.window <= 1.0)) throw ConfigError("window must lie in (0, 1]");
}

inline void apply_config_file(const std::string& path, RunConfig& rc) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  apply_config_text(ss.str(), rc);
}

inline nlohmann::json to_json(const RunConfig& rc) {
  const auto& g = rc.game;
  const auto& t = rc.training;
  return {
      {"experiment", rc.experiment.id},
      {"experiment_name", rc.experiment.name},
      {"expected_outcome", std::string(to_string(rc.experiment.expected))},
      {"seed", rc.seed},
      {"alphabet_size", g.alphabet_size},
      {"question_max_len", g.question_max_len},
      {"answer_max_len_blue", g.answer_max_len_blue},
      {"answer_max_len_red", g.answer_max_len_red},
      {"hidden_interrogator", g.hidden_interrogator},
      {"hidden_blue", g.hidden_blue},
      {"hidden_red", g.hidden_red},
      {"batch_size", g.batch_size},
      {"iterations", g.iterations},
      {"actor_lr", t.actor.learning_rate},
      {"critic_lr", t.critic.learning_rate},
      {"discriminator_lr", t.discriminator.learning_rate},
      {"adam_beta1", t.actor.beta1},
      {"adam_beta2", t.actor.beta2},
      {"adam_epsilon", t.actor.epsilon},
      {"discriminator_target", t.discriminator_target == DiscriminatorTarget::true_type ? "true_type" : "literal"},
      {"window", rc.window},
  };
}

}  // namespace imitation
