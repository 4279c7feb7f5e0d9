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

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "imitation/game/engine.hpp"
#include "imitation/training/losses.hpp"
#include "imitation/training/trainer.hpp"

namespace imitation {
namespace {

constexpr AgentType B = AgentType::blue;
constexpr AgentType R = AgentType::red;
const Alphabet kAlpha(4);

void set_head(CriticModel& c, std::span<const double> bias) {
  std::fill(c.head.weight.values().begin(), c.head.weight.values().end(), 0.0);
  std::copy(bias.begin(), bias.end(), c.head.bias.values().begin());
}

double bce_ref(double p, double y) {
  p = std::clamp(p, 1e-7, 1.0 - 1e-7);
  return -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
}

GameConfig small_game() {
  GameConfig cfg;
  cfg.batch_size = 8;
  cfg.iterations = 5;
  cfg.answer_max_len_blue = 3;
  cfg.answer_max_len_red = 3;
  return cfg;
}

TEST(CriticLoss, EosOnlyAtHalf) {
  Rng rng(1);
  auto critic = CriticModel::init(kAlpha, 8, rng);
  set_head(critic, std::vector<double>(5, 0.0));
  const std::vector<Symbol> eos{4};
  Tape tape;
  EXPECT_NEAR(tape.scalar_value(agent_critic_loss(tape, critic, eos, B)), 0.6931471805599453, 1e-12);
  EXPECT_NEAR(tape.scalar_value(agent_critic_loss(tape, critic, eos, R)), 0.6931471805599453, 1e-12);
}

TEST(CriticLoss, ConfidentCorrectCriticIsNearZero) {
  Rng rng(1);
  auto critic = CriticModel::init(kAlpha, 8, rng);
  set_head(critic, std::vector<double>(5, 40.0));
  const std::vector<Symbol> eos{4};
  Tape tape;
  EXPECT_NEAR(tape.scalar_value(agent_critic_loss(tape, critic, eos, B)), 0.0, 1e-6);
}

TEST(CriticLoss, TwoPositionTermByTerm) {
  Rng rng(2);
  auto critic = CriticModel::init(kAlpha, 8, rng);
  critic.head.bias.fill_uniform(rng, 1.0);
  const std::vector<Symbol> m{2, 4};
  const auto q0 = critic_q(critic, std::span<const Symbol>(m).first(0));
  const auto q1 = critic_q(critic, std::span<const Symbol>(m).first(1));
  for (AgentType inferred : {B, R}) {
    const double y = inferred == B ? 1.0 : 0.0;
    Tape tape;
    EXPECT_NEAR(tape.scalar_value(agent_critic_loss(tape, critic, m, inferred)),
                bce_ref(q0[2], y) + bce_ref(q1[4], y), 1e-12);
  }
}

TEST(CriticLoss, InterrogatorTargetsCorrectness) {
  Rng rng(3);
  auto critic = CriticModel::init(kAlpha, 8, rng);
  const std::vector<Symbol> full{4, 1, 4};
  Tape tape;
  for (AgentType truth : {B, R}) {
    for (AgentType inferred : {B, R}) {
      const double got = tape.scalar_value(interrogator_critic_loss(tape, critic, full, truth, inferred));
      const double want = tape.scalar_value(critic_sequence_loss(tape, critic, full, truth == inferred ? 1.0 : 0.0));
      EXPECT_EQ(got, want);
    }
  }
}

TEST(CriticLoss, EmptySequenceIsAnInputError) {
  Rng rng(3);
  auto critic = CriticModel::init(kAlpha, 8, rng);
  Tape tape;
  EXPECT_THROW(critic_sequence_loss(tape, critic, {}, 1.0), InputError);
}

TEST(DiscriminatorLoss, TargetModes) {
  EXPECT_EQ(discriminator_target(DiscriminatorTarget::true_type, B, R), 1.0);
  EXPECT_EQ(discriminator_target(DiscriminatorTarget::true_type, R, R), 0.0);
  EXPECT_EQ(discriminator_target(DiscriminatorTarget::literal, R, R), 1.0);
  EXPECT_EQ(discriminator_target(DiscriminatorTarget::literal, B, R), 0.0);
}

TEST(DiscriminatorLoss, MatchesBceOfDiscriminator) {
  Rng rng(4);
  auto m = InterrogatorModel::init(kAlpha, 8, rng);
  const std::vector<Symbol> full{4, 0, 3, 4};
  const double p = discriminate(m, full);
  Tape tape;
  EXPECT_NEAR(tape.scalar_value(discriminator_loss(tape, m, full, B)), bce_ref(p, 1.0), 1e-12);
  EXPECT_NEAR(tape.scalar_value(discriminator_loss(tape, m, full, R)), bce_ref(p, 0.0), 1e-12);
}

TEST(ActorScore, OneHotPolicyCollectsRealizedQ) {
  Rng rng(5);
  auto actor = ActorModel::init(kAlpha, 8, rng);
  auto critic = CriticModel::init(kAlpha, 8, rng);
  critic.head.bias.fill_uniform(rng, 2.0);
  actor.decoder.head.bias(1) = 1000.0;
  const auto question = Message::from({3, 4}, kAlpha);
  Tape tape;
  auto scored = actor_score(tape, actor, critic, question, 3, rng);
  EXPECT_EQ(scored.message, Message::from({1, 1, 1, 4}, kAlpha));
  std::vector<Symbol> prefix(question.symbols().begin(), question.symbols().end());
  double want = 0.0;
  for (int k = 0; k < 4; ++k) {
    want += critic_q(critic, prefix)[1];
    prefix.push_back(scored.message.symbols()[static_cast<std::size_t>(k)]);
  }
  EXPECT_NEAR(tape.scalar_value(scored.score), want, 1e-12);
}

TEST(ActorScore, ConstantCriticGivesFlatScoreAndZeroGradient) {
  Rng rng(6);
  auto actor = ActorModel::init(kAlpha, 8, rng);
  auto critic = CriticModel::init(kAlpha, 8, rng);
  set_head(critic, std::vector<double>(5, 0.0));
  for (int i = 0; i < 20; ++i) {
    Tape tape;
    auto scored = actor_score(tape, actor, critic, Message::empty(kAlpha), 6, rng);
    EXPECT_NEAR(tape.scalar_value(scored.score), 0.5 * static_cast<double>(scored.message.size()), 1e-12);
    tape.backward(scored.score);
    for (auto* p : actor.parameters()) {
      for (double g : p->grad()) EXPECT_NEAR(g, 0.0, 1e-14);
    }
    nn::zero_grads(actor.parameters());
  }
}

TEST(ActorScore, ZeroLengthLimitScoresOnlyTheEosPosition) {
  Rng rng(7);
  auto actor = ActorModel::init(kAlpha, 8, rng);
  auto critic = CriticModel::init(kAlpha, 8, rng);
  const auto q = Message::from({2, 4}, kAlpha);
  Rng a(1);
  Rng b(1);
  Tape tape;
  auto scored = actor_score(tape, actor, critic, q, 0, a);
  const auto pi = actor_respond(actor, q, 0, b).steps.at(0).probs;
  const auto qv = critic_q(critic, q.symbols());
  double want = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i) want += pi[i] * qv[i];
  EXPECT_NEAR(tape.scalar_value(scored.score), want, 1e-12);
}

TEST(Trainer, EmptyBatchIsRejected) {
  auto cfg = small_game();
  auto players = Players::init(cfg, 1);
  Trainer trainer(players, cfg, {});
  Rng rng(1);
  EXPECT_THROW(trainer.train_from_data({}), std::invalid_argument);
  EXPECT_THROW(trainer.train_actors({}, rng), std::invalid_argument);
}

TEST(Trainer, StagesTouchOnlyTheirOwnParameters) {
  auto cfg = small_game();
  cfg.question_max_len = 2;
  auto players = Players::init(cfg, 2);
  Trainer trainer(players, cfg, {});
  Rng rng(2);
  std::vector<InteractionRecord> batch;
  for (std::uint64_t i = 0; i < 8; ++i) batch.push_back(play_round(players, cfg, rng, 0, i));

  auto actors = [&] {
    return std::array{nn::checksum(players.blue.parameters()), nn::checksum(players.red.parameters()),
                      nn::checksum(players.interrogator.question_parameters())};
  };
  auto data_side = [&] {
    return std::array{nn::checksum(players.blue_critic.parameters()), nn::checksum(players.red_critic.parameters()),
                      nn::checksum(players.interrogator.critic_parameters()),
                      nn::checksum(players.interrogator.discriminator_parameters())};
  };

  const auto a0 = actors();
  const auto d0 = data_side();
  trainer.train_from_data(batch);
  EXPECT_EQ(actors(), a0);
  const auto d1 = data_side();
  for (std::size_t i = 0; i < d0.size(); ++i) EXPECT_NE(d1[i], d0[i]);

  trainer.train_actors(batch, rng);
  EXPECT_EQ(data_side(), d1);
  const auto a1 = actors();
  for (std::size_t i = 0; i < a0.size(); ++i) EXPECT_NE(a1[i], a0[i]);
  for (auto* p : players.interrogator.discriminator_parameters()) {
    for (double g : p->grad()) EXPECT_EQ(g, 0.0);
  }
}

TEST(Trainer, IterationPublishesOneBatch) {
  auto cfg = small_game();
  auto players = Players::init(cfg, 3);
  Trainer trainer(players, cfg, {});
  Rng rng(3);
  PublicLog log;
  for (std::uint64_t t = 0; t < 3; ++t) {
    auto res = trainer.iteration(log, t, rng);
    EXPECT_EQ(log.size(), (t + 1) * cfg.batch_size);
    EXPECT_GE(res.metrics.accuracy, 0.0);
    EXPECT_LE(res.metrics.accuracy, 1.0);
  }
}

TEST(Trainer, SameSeedSameTrajectory) {
  auto trajectory = [] {
    auto cfg = small_game();
    auto players = Players::init(cfg, 4);
    Trainer trainer(players, cfg, {});
    Rng rng(derive_seed(4, 1));
    PublicLog log;
    std::vector<double> out;
    for (std::uint64_t t = 0; t < 4; ++t) {
      auto res = trainer.iteration(log, t, rng);
      out.push_back(res.metrics.accuracy);
      out.push_back(res.losses.discriminator);
      out.push_back(res.scores.blue);
    }
    out.push_back(static_cast<double>(nn::checksum(players.red.parameters())));
    return out;
  };
  EXPECT_EQ(trajectory(), trajectory());
}

TEST(Trainer, CriticLossFallsOnAStationaryDistribution) {
  auto cfg = small_game();
  cfg.batch_size = 32;
  auto players = Players::init(cfg, 5);
  TrainingConfig tc;
  tc.critic.learning_rate = 1e-2;
  Trainer trainer(players, cfg, tc);
  Rng rng(5);
  LabelOverride rule = [](std::span<const Symbol> full, AgentType) { return full.size() % 2 == 0 ? 1.0 : 0.0; };
  std::vector<double> losses;
  for (std::uint64_t t = 0; t < 200; ++t) {
    std::vector<InteractionRecord> batch;
    for (std::uint64_t i = 0; i < cfg.batch_size; ++i) batch.push_back(play_round(players, cfg, rng, t, i, rule));
    losses.push_back(trainer.train_from_data(batch).critic_blue);
  }
  auto median = [&](std::size_t from) {
    std::vector<double> w(losses.begin() + static_cast<long>(from), losses.begin() + static_cast<long>(from + 20));
    std::nth_element(w.begin(), w.begin() + 10, w.end());
    return w[10];
  };
  EXPECT_LT(median(180), 0.8 * median(0));
  int rises = 0;
  for (std::size_t w = 20; w < 200; w += 20) rises += median(w) > median(w - 20) * 1.05 ? 1 : 0;
  EXPECT_LE(rises, 1);
}

TEST(Trainer, HardWiredCriticPullsTheActor) {
  GameConfig cfg;
  cfg.alphabet_size = 2;
  cfg.answer_max_len_blue = 2;
  cfg.answer_max_len_red = 2;
  cfg.batch_size = 16;
  auto players = Players::init(cfg, 6);
  set_head(players.blue_critic, std::vector<double>{50.0, -50.0, -50.0});
  TrainingConfig tc;
  Trainer trainer(players, cfg, tc);
  Rng rng(6);
  std::vector<InteractionRecord> batch(cfg.batch_size);
  for (std::size_t i = 0; i < batch.size(); ++i) batch[i].question = Message::empty(cfg.alphabet());
  auto p0 = [&] {
    Rng probe(1);
    return actor_respond(players.blue, Message::empty(cfg.alphabet()), 2, probe).steps[0].probs[0];
  };
  const double start = p0();
  double best = start;
  for (int step = 0; step < 300 && best <= 0.9; ++step) {
    trainer.train_actors(batch, rng);
    best = std::max(best, p0());
  }
  EXPECT_GT(best, 0.9);
  EXPECT_GT(p0(), start);
}

}  // namespace
}  // namespace imitation
