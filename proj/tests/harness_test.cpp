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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "imitation/harness/config.hpp"
#include "imitation/harness/experiments.hpp"
#include "imitation/harness/metrics.hpp"
#include "imitation/harness/run.hpp"

namespace imitation {
namespace {

namespace fs = std::filesystem;
constexpr AgentType B = AgentType::blue;
constexpr AgentType R = AgentType::red;
const Alphabet kAlpha(4);

InteractionRecord make_record(std::uint64_t t, std::uint64_t i, const Message& blue, const Message& red,
                              std::size_t correct) {
  InteractionRecord r;
  r.iteration = t;
  r.round = i;
  r.question = Message::empty(kAlpha);
  r.slots = {B, R};
  r.answers = {blue, red};
  r.inferred = {correct >= 1 ? B : R, correct >= 2 ? R : B};
  r.rewards = assign_rewards(r.slots, r.inferred);
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(Experiments, BuiltinTable) {
  const auto table = builtin_experiments();
  ASSERT_EQ(table.size(), 7u);
  const int h_blue[] = {8, 8, 8, 8, 4, 16, 8};
  const int h_red[] = {8, 8, 8, 4, 8, 8, 16};
  const int l_blue[] = {8, 6, 5, 8, 8, 8, 8};
  const int l_red[] = {8, 5, 6, 8, 8, 8, 8};
  const bool questions[] = {false, false, false, true, true, true, true};
  const bool separating[] = {false, true, false, true, false, false, false};
  for (std::size_t i = 0; i < 7; ++i) {
    const auto& e = table[i];
    EXPECT_EQ(e.id, static_cast<int>(i + 1));
    EXPECT_EQ(e.hidden_interrogator, 8u);
    EXPECT_EQ(e.hidden_blue, static_cast<std::size_t>(h_blue[i]));
    EXPECT_EQ(e.hidden_red, static_cast<std::size_t>(h_red[i]));
    EXPECT_EQ(e.answer_max_len_blue, static_cast<std::size_t>(l_blue[i]));
    EXPECT_EQ(e.answer_max_len_red, static_cast<std::size_t>(l_red[i]));
    EXPECT_EQ(e.question_max_len > 0, questions[i]);
    EXPECT_EQ(e.expected, separating[i] ? Outcome::separating : Outcome::pooling);
    EXPECT_EQ(builtin_experiment(e.id), e);
  }
  EXPECT_THROW(builtin_experiment(0), ConfigError);
  EXPECT_THROW(builtin_experiment(8), ConfigError);
}

TEST(Equilibrium, Thresholds) {
  EXPECT_EQ(classify_equilibrium(0.95).outcome, Outcome::separating);
  EXPECT_EQ(classify_equilibrium(0.80).outcome, Outcome::separating);
  EXPECT_EQ(classify_equilibrium(0.50).outcome, Outcome::pooling);
  EXPECT_EQ(classify_equilibrium(0.65).outcome, Outcome::pooling);
  EXPECT_EQ(classify_equilibrium(0.72).outcome, Outcome::undetermined);
  EXPECT_THROW(classify_equilibrium(1.5), InputError);
  auto rank = [](Outcome o) { return o == Outcome::pooling ? 0 : o == Outcome::undetermined ? 1 : 2; };
  int prev = 0;
  for (int i = 0; i <= 1000; ++i) {
    const int r = rank(classify_equilibrium(i / 1000.0).outcome);
    EXPECT_GE(r, prev);
    prev = r;
  }
  EXPECT_EQ(outcome_from_string("separating"), Outcome::separating);
  EXPECT_THROW(outcome_from_string("mixed"), InputError);
}

TEST(Metrics, MutualInformationExamples) {
  const auto a = Message::from({0, 4}, kAlpha);
  const auto b = Message::from({1, 4}, kAlpha);
  std::vector<InteractionRecord> same, split;
  for (std::uint64_t i = 0; i < 10; ++i) {
    same.push_back(make_record(0, i, a, a, 1));
    split.push_back(make_record(0, i, a, b, 2));
  }
  EXPECT_NEAR(mutual_information(same), 0.0, 1e-12);
  EXPECT_NEAR(mutual_information(split), 1.0, 1e-12);
  EXPECT_NEAR(answer_entropy(split, B), 0.0, 1e-12);
}

TEST(Metrics, MutualInformationIsBounded) {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<InteractionRecord> recs;
    const std::size_t n = 1 + rng() % 30;
    for (std::uint64_t i = 0; i < n; ++i) {
      recs.push_back(make_record(0, i, Message::from({static_cast<Symbol>(rng() % 3), 4}, kAlpha),
                                 Message::from({static_cast<Symbol>(rng() % 4), 4}, kAlpha), rng() % 3));
    }
    const double mi = mutual_information(recs);
    EXPECT_GE(mi, 0.0);
    EXPECT_LE(mi, 1.0 + 1e-12);
    const auto m = compute_metrics(recs, 0);
    EXPECT_LE(mi, 0.5 * (m.entropy_blue + m.entropy_red) + 1.0 + 1e-12);
  }
}

TEST(Metrics, PerIterationRow) {
  const auto a = Message::from({0, 4}, kAlpha);
  std::vector<InteractionRecord> recs{make_record(3, 0, a, a, 2), make_record(3, 1, a, a, 0)};
  const auto m = compute_metrics(recs, 3);
  EXPECT_EQ(m.iteration, 3u);
  EXPECT_DOUBLE_EQ(m.accuracy, 0.5);
  EXPECT_DOUBLE_EQ(m.accuracy_blue, 0.5);
  EXPECT_DOUBLE_EQ(m.reward_interrogator, 0.5);
  EXPECT_DOUBLE_EQ(m.reward_red, 0.5);
}

TEST(AccuracyWindow, Examples) {
  const auto a = Message::from({0, 4}, kAlpha);
  PublicLog perfect;
  for (std::uint64_t t = 0; t < 10; ++t) perfect.publish(make_record(t, 0, a, a, 2));
  EXPECT_DOUBLE_EQ(accuracy_window(perfect, 0.2), 1.0);

  PublicLog mixed;
  Rng rng(2);
  double total = 0.0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    for (std::uint64_t i = 0; i < 50; ++i) {
      const std::size_t c = (coin_flip(rng) ? 1u : 0u) + (coin_flip(rng) ? 1u : 0u);
      total += static_cast<double>(c);
      mixed.publish(make_record(t, i, a, a, c));
    }
  }
  EXPECT_NEAR(accuracy_window(mixed, 1.0), total / 10000.0, 1e-12);
  EXPECT_NEAR(accuracy_window(mixed, 1.0), 0.5, 0.02);
  EXPECT_EQ(final_window(mixed, 0.2).size(), 20u * 50u);
  EXPECT_EQ(final_window(mixed, 0.2).front().iteration, 80u);

  EXPECT_THROW(accuracy_window(PublicLog{}, 0.2), InputError);
  EXPECT_THROW(accuracy_window(perfect, 0.0), InputError);
}

TEST(MetricsCsv, RoundTrip) {
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    MetricsRow m;
    m.iteration = rng() % 5000;
    for (double* v : {&m.accuracy, &m.accuracy_blue, &m.accuracy_red, &m.reward_interrogator, &m.reward_blue,
                      &m.reward_red, &m.entropy_blue, &m.entropy_red, &m.mutual_information}) {
      *v = uniform01(rng) * 3.0;
    }
    EXPECT_EQ(parse_metrics_csv_line(metrics_csv_line(m)), m);
  }
  EXPECT_THROW(parse_metrics_csv_line("1,2,3"), InputError);
}

TEST(Config, DefaultsFollowTheExperiment) {
  const auto rc = make_run_config(4, 9);
  EXPECT_EQ(rc.seed, 9u);
  EXPECT_EQ(rc.game.hidden_red, 4u);
  EXPECT_EQ(rc.game.question_max_len, kQuestionLimit);
  EXPECT_EQ(rc.game.batch_size, 64u);
  EXPECT_EQ(rc.game.iterations, 2000u);
  EXPECT_DOUBLE_EQ(rc.window, 0.2);
}

TEST(Config, TextOverrides) {
  auto rc = make_run_config(1, 1);
  apply_config_text("# comment\niterations = 50\nbatch_size=16  # trailing\nactor_lr = 0.02\n"
                    "discriminator_target = literal\nexpected_outcome = separating\n",
                    rc);
  EXPECT_EQ(rc.game.iterations, 50u);
  EXPECT_EQ(rc.game.batch_size, 16u);
  EXPECT_DOUBLE_EQ(rc.training.actor.learning_rate, 0.02);
  EXPECT_EQ(rc.training.discriminator_target, DiscriminatorTarget::literal);
  EXPECT_EQ(rc.experiment.expected, Outcome::separating);
  EXPECT_THROW(apply_config_text("unknown_key = 3\n", rc), ConfigError);
  EXPECT_THROW(apply_config_text("iterations = many\n", rc), ConfigError);
  EXPECT_THROW(apply_config_text("iterations\n", rc), ConfigError);
  EXPECT_THROW(apply_config_text("batch_size = 0\n", rc), ConfigError);
}

class RunTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("imitation_run_test_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST_F(RunTest, OutputsAreByteIdenticalAcrossRuns) {
  auto rc = make_run_config(4, 3);
  rc.game.iterations = 12;
  rc.game.batch_size = 8;
  const auto a = run(rc, {dir_ / "a"});
  const auto b = run(rc, {dir_ / "b"});
  EXPECT_EQ(a.rows, b.rows);
  for (const char* f : {"metrics.csv", "transcript.jsonl", "summary.json"}) {
    EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
  }
  const auto rows = read_metrics_csv(dir_ / "a" / "metrics.csv");
  EXPECT_EQ(rows, a.rows);
  EXPECT_EQ(rows.size(), 12u);

  std::ifstream tr(dir_ / "a" / "transcript.jsonl");
  std::string line;
  std::size_t lines = 0;
  while (std::getline(tr, line)) ++lines;
  EXPECT_EQ(lines, 12u * 8u);

  const auto summary = nlohmann::json::parse(slurp(dir_ / "a" / "summary.json"));
  EXPECT_EQ(summary.at("experiment"), 4);
  EXPECT_EQ(summary.at("label"), std::string(to_string(a.label.outcome)));
}

TEST_F(RunTest, DifferentSeedsDiffer) {
  auto rc = make_run_config(1, 1);
  rc.game.iterations = 5;
  rc.game.batch_size = 8;
  const auto a = run(rc);
  rc.seed = 2;
  const auto b = run(rc);
  EXPECT_NE(a.rows, b.rows);
}

}  // namespace
}  // namespace imitation
