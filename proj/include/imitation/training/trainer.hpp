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

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "imitation/game/engine.hpp"
#include "imitation/harness/metrics.hpp"
#include "imitation/nn/adam.hpp"
#include "imitation/training/losses.hpp"

namespace imitation {

struct TrainingConfig {
  nn::AdamConfig actor{};
  nn::AdamConfig critic{};
  nn::AdamConfig discriminator{};
  DiscriminatorTarget discriminator_target = DiscriminatorTarget::true_type;
};

struct DataLosses {
  double critic_blue = 0.0;
  double critic_red = 0.0;
  double critic_interrogator = 0.0;
  double discriminator = 0.0;
};

struct ActorScores {
  double blue = 0.0;
  double red = 0.0;
  double interrogator = 0.0;
};

struct IterationResult {
  MetricsRow metrics;
  DataLosses losses;
  ActorScores scores;
};

/// Owns the optimizer state for every trainable group of a Players bundle
/// and runs the two training stages. Each stage takes exactly one Adam step
/// per group on losses summed over the whole batch.
class Trainer {
 public:
  Trainer(Players& players, GameConfig game, TrainingConfig config)
      : players_(players),
        game_(game),
        config_(config),
        blue_actor_(config.actor, players.blue.parameters()),
        red_actor_(config.actor, players.red.parameters()),
        question_(config.actor, players.interrogator.question_parameters()),
        blue_critic_(config.critic, players.blue_critic.parameters()),
        red_critic_(config.critic, players.red_critic.parameters()),
        interrogator_critic_(config.critic, players.interrogator.critic_parameters()),
        discriminator_(config.discriminator, players.interrogator.discriminator_parameters()) {
    game_.validate();
  }

  const GameConfig& game() const { return game_; }
  const TrainingConfig& config() const { return config_; }

  CriticModel& critic_of(AgentType t) { return players_.critic(t); }
  CriticModel& interrogator_critic() { return players_.interrogator.critic; }

  /// Stage one: critics and the discriminator learn from the published batch.
  DataLosses train_from_data(std::span<const InteractionRecord> batch) {
    if (batch.empty()) throw std::invalid_argument("train_from_data: empty batch");
    DataLosses out;
    out.critic_blue = fit_agent_critic(critic_of(AgentType::blue), blue_critic_, batch);
    out.critic_red = fit_agent_critic(critic_of(AgentType::red), red_critic_, batch);

    {
      CriticModel& critic = interrogator_critic();
      auto params = critic.parameters();
      nn::zero_grads(params);
      Tape tape;
      std::vector<Var> losses;
      for (const auto& r : batch) {
        for (std::size_t i = 0; i < 2; ++i) {
          losses.push_back(interrogator_critic_loss(tape, critic, r.exchange(i), r.slots[i], r.inferred[i]));
        }
      }
      out.critic_interrogator = step(tape, tape.sum(losses), interrogator_critic_, params);
    }

    {
      auto params = players_.interrogator.discriminator_parameters();
      nn::zero_grads(params);
      Tape tape;
      std::vector<Var> losses;
      for (const auto& r : batch) {
        for (std::size_t i = 0; i < 2; ++i) {
          const double target = discriminator_target(config_.discriminator_target, r.slots[i], r.inferred[i]);
          losses.push_back(discriminator_loss(tape, players_.interrogator, r.exchange(i), target));
        }
      }
      out.discriminator = step(tape, tape.sum(losses), discriminator_, params);
    }
    return out;
  }

  /// Stage two: every actor ascends the critic-estimated expected reward of
  /// fresh replies. Agents answer the batch's questions; the interrogator
  /// answers one EOS-only trigger per record.
  ActorScores train_actors(std::span<const InteractionRecord> batch, Rng& rng) {
    if (batch.empty()) throw std::invalid_argument("train_actors: empty batch");
    ActorScores out;
    for (AgentType t : {AgentType::blue, AgentType::red}) {
      ActorModel& actor = players_.actor(t);
      auto params = actor.parameters();
      nn::zero_grads(params);
      Tape tape;
      std::vector<Var> scores;
      for (const auto& r : batch) {
        scores.push_back(actor_score(tape, actor, critic_of(t), r.question, game_.answer_max_len(t), rng).score);
      }
      const double s = ascend(tape, tape.sum(scores), t == AgentType::blue ? blue_actor_ : red_actor_, params);
      (t == AgentType::blue ? out.blue : out.red) = s;
    }

    {
      InterrogatorModel& m = players_.interrogator;
      auto params = m.question_parameters();
      nn::zero_grads(params);
      Tape tape;
      std::vector<Var> scores;
      for (std::size_t i = 0; i < batch.size(); ++i) {
        scores.push_back(actor_score(tape, m, game_.question_max_len, rng).score);
      }
      out.interrogator = ascend(tape, tape.sum(scores), question_, params);
      // The shared encoder also received gradient here; it belongs to the
      // discriminator group, so drop it.
      nn::zero_grads(m.discriminator_parameters());
    }
    return out;
  }

  /// Plays N rounds, publishes them, then runs both stages.
  IterationResult iteration(PublicLog& log, std::uint64_t t, Rng& rng, const LabelOverride& label_override = {}) {
    std::vector<InteractionRecord> batch;
    batch.reserve(game_.batch_size);
    for (std::size_t i = 0; i < game_.batch_size; ++i) {
      batch.push_back(play_round(players_, game_, rng, t, i, label_override));
    }
    for (const auto& r : batch) log.publish(r);
    const auto published = log.since(t);

    IterationResult res;
    res.metrics = compute_metrics(published, t);
    res.losses = train_from_data(published);
    res.scores = train_actors(published, rng);
    return res;
  }

 private:
  double fit_agent_critic(CriticModel& critic, nn::AdamState& adam, std::span<const InteractionRecord> batch) {
    auto params = critic.parameters();
    nn::zero_grads(params);
    Tape tape;
    std::vector<Var> losses;
    for (const auto& r : batch) {
      for (std::size_t i = 0; i < 2; ++i) {
        losses.push_back(agent_critic_loss(tape, critic, r.exchange(i), r.inferred[i]));
      }
    }
    return step(tape, tape.sum(losses), adam, params);
  }

  static double step(Tape& tape, Var loss, nn::AdamState& adam, const nn::ParamList& params) {
    const double value = tape.scalar_value(loss);
    tape.backward(loss);
    adam.update(params);
    return value;
  }

  /// Maximizes `score` by descending on its negation.
  static double ascend(Tape& tape, Var score, nn::AdamState& adam, const nn::ParamList& params) {
    const double value = tape.scalar_value(score);
    tape.backward(tape.scale(score, -1.0));
    adam.update(params);
    return value;
  }

  Players& players_;
  GameConfig game_;
  TrainingConfig config_;
  nn::AdamState blue_actor_;
  nn::AdamState red_actor_;
  nn::AdamState question_;
  nn::AdamState blue_critic_;
  nn::AdamState red_critic_;
  nn::AdamState interrogator_critic_;
  nn::AdamState discriminator_;
};

}  // namespace imitation
