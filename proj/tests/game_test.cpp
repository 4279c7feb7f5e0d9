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

#include <sstream>
#include <type_traits>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "imitation/game/engine.hpp"
#include "imitation/game/transcript.hpp"

namespace imitation {
namespace {

constexpr AgentType B = AgentType::blue;
constexpr AgentType R = AgentType::red;

GameConfig small_game() {
  GameConfig cfg;
  cfg.batch_size = 8;
  cfg.iterations = 4;
  return cfg;
}

TEST(Rewards, AllFourOutcomes) {
  // slot 0 holds blue, slot 1 holds red
  const std::array<AgentType, 2> truth{B, R};
  struct Row {
    std::array<AgentType, 2> inferred;
    int r_i, r_b, r_r;
  };
  const Row table[] = {
      {{B, R}, 1, 1, 0},
      {{B, B}, 0, 1, 1},
      {{R, R}, 0, 0, 0},
      {{R, B}, 0, 0, 1},
  };
  for (const auto& row : table) {
    for (bool swapped : {false, true}) {
      auto t = truth;
      auto inf = row.inferred;
      if (swapped) {
        std::swap(t[0], t[1]);
        std::swap(inf[0], inf[1]);
      }
      const Rewards r = assign_rewards(t, inf);
      EXPECT_EQ(r.interrogator, row.r_i);
      EXPECT_EQ(r.blue, row.r_b);
      EXPECT_EQ(r.red, row.r_r);
    }
  }
  EXPECT_THROW(assign_rewards({B, B}, {B, R}), std::logic_error);
}

TEST(PlayRound, ZeroQuestionLimitGivesEosQuestion) {
  auto cfg = small_game();
  auto players = Players::init(cfg, 1);
  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    auto rec = play_round(players, cfg, rng, 0, static_cast<std::uint64_t>(i));
    EXPECT_EQ(rec.question, Message::empty(cfg.alphabet()));
    EXPECT_NE(rec.slots[0], rec.slots[1]);
  }
}

TEST(PlayRound, SlotOrderIsUniform) {
  auto cfg = small_game();
  cfg.answer_max_len_blue = 2;
  cfg.answer_max_len_red = 2;
  auto players = Players::init(cfg, 2);
  Rng rng(2);
  int blue_first = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    blue_first += play_round(players, cfg, rng).slots[0] == B ? 1 : 0;
  }
  EXPECT_NEAR(static_cast<double>(blue_first) / n, 0.5, 0.02);
}

TEST(PlayRound, PerfectLabelerWinsEveryRound) {
  auto cfg = small_game();
  auto players = Players::init(cfg, 3);
  Rng rng(3);
  LabelOverride perfect = [](std::span<const Symbol>, AgentType truth) { return truth == B ? 1.0 : 0.0; };
  for (int i = 0; i < 200; ++i) {
    auto rec = play_round(players, cfg, rng, 0, static_cast<std::uint64_t>(i), perfect);
    EXPECT_EQ(rec.rewards.interrogator, 1);
    EXPECT_EQ(rec.rewards.blue, 1);
    EXPECT_EQ(rec.rewards.red, 0);
    EXPECT_EQ(rec.correct_count(), 2u);
  }
}

TEST(PlayRound, SlotsMapBackToSources) {
  auto cfg = small_game();
  cfg.answer_max_len_blue = 0;
  cfg.answer_max_len_red = 6;
  auto players = Players::init(cfg, 4);
  players.red.decoder.head.bias(cfg.alphabet().eos()) = -1000.0;
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    auto rec = play_round(players, cfg, rng);
    EXPECT_EQ(rec.answer_of(B).content_length(), 0u);
    EXPECT_EQ(rec.answer_of(R).content_length(), 6u);
    EXPECT_EQ(rec.answers[rec.slot_of(R)], rec.answer_of(R));
  }
}

TEST(PlayRound, SameSeedSameRecords) {
  auto cfg = small_game();
  auto pa = Players::init(cfg, 5);
  auto pb = Players::init(cfg, 5);
  Rng a(6);
  Rng b(6);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(play_round(pa, cfg, a), play_round(pb, cfg, b));
}

TEST(PublicLog, AppendAndReadBack) {
  auto cfg = small_game();
  auto players = Players::init(cfg, 7);
  Rng rng(7);
  PublicLog log;
  std::vector<InteractionRecord> kept;
  for (std::uint64_t t = 0; t < 3; ++t) {
    for (std::uint64_t i = 0; i < 5; ++i) {
      kept.push_back(play_round(players, cfg, rng, t, i));
      log.publish(kept.back());
    }
  }
  ASSERT_EQ(log.size(), 15u);
  for (std::size_t i = 0; i < kept.size(); ++i) EXPECT_EQ(log.at(i), kept[i]);
  EXPECT_EQ(log.since(1).size(), 10u);
  EXPECT_EQ(log.since(3).size(), 0u);
  EXPECT_EQ(log.iteration_count(), 3u);
}

TEST(PublicLog, RejectsDuplicatesAndReordering) {
  PublicLog log;
  InteractionRecord r;
  r.iteration = 2;
  r.round = 3;
  log.publish(r);
  EXPECT_THROW(log.publish(r), std::logic_error);
  r.round = 1;
  EXPECT_THROW(log.publish(r), std::logic_error);
  r.iteration = 1;
  r.round = 9;
  EXPECT_THROW(log.publish(r), std::logic_error);
  EXPECT_EQ(log.size(), 1u);
}

TEST(PublicLog, ReadAccessIsConst) {
  static_assert(std::is_same_v<decltype(std::declval<PublicLog&>().at(0)), const InteractionRecord&>);
  static_assert(std::is_same_v<decltype(std::declval<PublicLog&>().records()),
                               std::span<const InteractionRecord>>);
  SUCCEED();
}

TEST(Transcript, RoundTrip) {
  auto cfg = small_game();
  cfg.question_max_len = 3;
  auto players = Players::init(cfg, 8);
  Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    auto rec = play_round(players, cfg, rng, 7, static_cast<std::uint64_t>(i));
    std::ostringstream line;
    write_transcript_line(line, rec);
    const std::string text = line.str();
    ASSERT_FALSE(text.empty());
    EXPECT_EQ(text.back(), '\n');
    EXPECT_EQ(text.find('\n'), text.size() - 1);
    EXPECT_EQ(record_from_json(nlohmann::json::parse(text), cfg.alphabet()), rec);
  }
}

TEST(Transcript, RejectsUnknownAgentType) {
  EXPECT_THROW(agent_type_from_string("green"), InputError);
}

}  // namespace
}  // namespace imitation
