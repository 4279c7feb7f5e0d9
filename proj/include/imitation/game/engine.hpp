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

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "imitation/agents/message.hpp"
#include "imitation/agents/models.hpp"
#include "imitation/nn/rng.hpp"

namespace imitation {

struct GameConfig {
  std::size_t alphabet_size = 4;
  std::size_t question_max_len = 0;
  std::size_t answer_max_len_blue = 8;
  std::size_t answer_max_len_red = 8;
  std::size_t hidden_interrogator = 8;
  std::size_t hidden_blue = 8;
  std::size_t hidden_red = 8;
  std::size_t batch_size = 64;
  std::size_t iterations = 2000;

  Alphabet alphabet() const { return Alphabet(alphabet_size); }

  std::size_t answer_max_len(AgentType t) const {
    return t == AgentType::blue ? answer_max_len_blue : answer_max_len_red;
  }

  void validate() const {
    if (alphabet_size == 0) throw ConfigError("alphabet_size must be >= 1");
    if (hidden_interrogator == 0 || hidden_blue == 0 || hidden_red == 0) {
      throw ConfigError("hidden sizes must be >= 1");
    }
    if (batch_size == 0) throw ConfigError("batch_size must be >= 1");
  }
};

/// The three players of one game. Each agent is an actor plus its critic;
/// the interrogator carries its own critic.
struct Players {
  InterrogatorModel interrogator;
  ActorModel blue;
  ActorModel red;
  CriticModel blue_critic;
  CriticModel red_critic;

  /// Each model draws its initial weights from its own sub-stream of `seed`,
  /// so resizing one player leaves the others' initialization unchanged.
  static Players init(const GameConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    const Alphabet alphabet = cfg.alphabet();
    Rng ri(derive_seed(seed, 101));
    Rng rb(derive_seed(seed, 102));
    Rng rr(derive_seed(seed, 103));
    Rng rbc(derive_seed(seed, 104));
    Rng rrc(derive_seed(seed, 105));
    return Players{InterrogatorModel::init(alphabet, cfg.hidden_interrogator, ri),
                   ActorModel::init(alphabet, cfg.hidden_blue, rb),
                   ActorModel::init(alphabet, cfg.hidden_red, rr),
                   CriticModel::init(alphabet, cfg.hidden_blue, rbc),
                   CriticModel::init(alphabet, cfg.hidden_red, rrc)};
  }

  ActorModel& actor(AgentType t) { return t == AgentType::blue ? blue : red; }
  CriticModel& critic(AgentType t) { return t == AgentType::blue ? blue_critic : red_critic; }
};

struct Rewards {
  int interrogator = 0;
  int blue = 0;
  int red = 0;

  bool operator==(const Rewards&) const = default;
};

/// Blue scores when its answer is labeled blue, red scores when its answer
/// is labeled blue, and the interrogator scores only when both labels are
/// right. `truth[i]` and `inferred[i]` describe the answer in slot i.
inline Rewards assign_rewards(std::array<AgentType, 2> truth, std::array<AgentType, 2> inferred) {
  if (truth[0] == truth[1]) throw std::logic_error("assign_rewards: slots must hold one blue and one red");
  Rewards r;
  for (std::size_t i = 0; i < 2; ++i) {
    if (truth[i] == AgentType::blue) r.blue = inferred[i] == AgentType::blue ? 1 : 0;
    if (truth[i] == AgentType::red) r.red = inferred[i] == AgentType::blue ? 1 : 0;
  }
  r.interrogator = (inferred[0] == truth[0] && inferred[1] == truth[1]) ? 1 : 0;
  return r;
}

/// One round: the question, both anonymized answers and their judgments.
struct InteractionRecord {
  std::uint64_t iteration = 0;
  std::uint64_t round = 0;
  Message question;
  std::array<AgentType, 2> slots{AgentType::blue, AgentType::red};  // true source per slot
  std::array<Message, 2> answers;
  std::array<AgentType, 2> inferred{AgentType::blue, AgentType::blue};
  std::array<double, 2> p_blue{0.5, 0.5};
  Rewards rewards;

  std::size_t slot_of(AgentType t) const { return slots[0] == t ? 0 : 1; }
  const Message& answer_of(AgentType t) const { return answers[slot_of(t)]; }
  std::vector<Symbol> exchange(std::size_t slot) const { return concat(question, answers[slot]); }
  std::size_t correct_count() const {
    return (inferred[0] == slots[0] ? 1u : 0u) + (inferred[1] == slots[1] ? 1u : 0u);
  }

  bool operator==(const InteractionRecord&) const = default;
};

/// Replaces the discriminator when set: maps (question || answer, true
/// source) to a probability of blue. Used for oracle and scripted labelers.
using LabelOverride = std::function<double(std::span<const Symbol>, AgentType)>;

/// Plays one round. The question comes from the interrogator's decoder, each
/// agent answers under its own length limit, the two answers are placed in a
/// uniformly random slot order and each is judged independently.
inline InteractionRecord play_round(Players& players, const GameConfig& cfg, Rng& rng,
                                    std::uint64_t iteration = 0, std::uint64_t round = 0,
                                    const LabelOverride& label_override = {}) {
  InteractionRecord rec;
  rec.iteration = iteration;
  rec.round = round;
  rec.question = interrogator_question(players.interrogator, cfg.question_max_len, rng).message;

  const Message blue_answer =
      actor_respond(players.blue, rec.question, cfg.answer_max_len_blue, rng).message;
  const Message red_answer =
      actor_respond(players.red, rec.question, cfg.answer_max_len_red, rng).message;

  if (coin_flip(rng)) {
    rec.slots = {AgentType::blue, AgentType::red};
    rec.answers = {blue_answer, red_answer};
  } else {
    rec.slots = {AgentType::red, AgentType::blue};
    rec.answers = {red_answer, blue_answer};
  }

  for (std::size_t i = 0; i < 2; ++i) {
    const auto full = rec.exchange(i);
    rec.p_blue[i] = label_override ? label_override(full, rec.slots[i])
                                   : discriminate(players.interrogator, full);
    rec.inferred[i] = classify(rec.p_blue[i]);
  }
  rec.rewards = assign_rewards(rec.slots, rec.inferred);
  return rec;
}

/// Append-only record of every round, readable by every player.
class PublicLog {
 public:
  /// Records must arrive in strictly increasing (iteration, round) order.
  void publish(InteractionRecord record) {
    if (!records_.empty()) {
      const auto& last = records_.back();
      const bool after = record.iteration > last.iteration ||
                         (record.iteration == last.iteration && record.round > last.round);
      if (!after) throw std::logic_error("publish: duplicate or out-of-order (iteration, round)");
    }
    records_.push_back(std::move(record));
  }

  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const InteractionRecord& at(std::size_t i) const { return records_.at(i); }
  std::span<const InteractionRecord> records() const { return records_; }

  /// Records whose iteration is at least `first_iteration`.
  std::span<const InteractionRecord> since(std::uint64_t first_iteration) const {
    std::size_t lo = 0;
    std::size_t hi = records_.size();
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (records_[mid].iteration < first_iteration) lo = mid + 1; else hi = mid;
    }
    return std::span<const InteractionRecord>(records_).subspan(lo);
  }

  /// Number of distinct iterations present.
  std::uint64_t iteration_count() const {
    if (records_.empty()) return 0;
    return records_.back().iteration - records_.front().iteration + 1;
  }

 private:
  std::vector<InteractionRecord> records_;
};

}  // namespace imitation
