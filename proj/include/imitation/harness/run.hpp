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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "imitation/game/transcript.hpp"
#include "imitation/harness/config.hpp"
#include "imitation/harness/metrics.hpp"
#include "imitation/training/trainer.hpp"

namespace imitation {

// ---------------------------------------------------------------------------
// metrics.csv

inline constexpr const char* kMetricsHeader = "iteration,acc,acc_blue,acc_red,r_I,r_blue,r_red,H_blue,H_red,MI";

inline std::string metrics_csv_line(const MetricsRow& m) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g",
                static_cast<unsigned long long>(m.iteration), m.accuracy, m.accuracy_blue,
                m.accuracy_red, m.reward_interrogator, m.reward_blue, m.reward_red, m.entropy_blue,
                m.entropy_red, m.mutual_information);
  return buf;
}

inline MetricsRow parse_metrics_csv_line(const std::string& line) {
  MetricsRow m;
  unsigned long long it = 0;
  const int n = std::sscanf(line.c_str(), "%llu,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf", &it, &m.accuracy,
                            &m.accuracy_blue, &m.accuracy_red, &m.reward_interrogator, &m.reward_blue,
                            &m.reward_red, &m.entropy_blue, &m.entropy_red, &m.mutual_information);
  if (n != 10) throw InputError("malformed metrics row: " + line);
  m.iteration = it;
  return m;
}

inline std::vector<MetricsRow> read_metrics_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kMetricsHeader) {
    throw InputError(path.string() + ": missing or unexpected header");
  }
  std::vector<MetricsRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty()) rows.push_back(parse_metrics_csv_line(line));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// A full run

struct WindowStats {
  double accuracy = 0.0;
  double accuracy_blue = 0.0;
  double accuracy_red = 0.0;
  double mutual_information = 0.0;  // pooled over the window's records
  double mean_entropy_blue = 0.0;   // mean of the per-iteration values
  double mean_entropy_red = 0.0;
  double mean_reward_interrogator = 0.0;
  double mean_reward_blue = 0.0;
  double mean_reward_red = 0.0;
};

struct RunResult {
  RunConfig config;
  std::vector<MetricsRow> rows;
  WindowStats initial;  // first `window` of the run
  WindowStats final;    // last `window` of the run
  EquilibriumLabel label;
};

namespace detail {

inline WindowStats window_stats(std::span<const InteractionRecord> recs, std::span<const MetricsRow> rows) {
  WindowStats w;
  if (recs.empty()) return w;
  double correct = 0, blue_ok = 0, red_ok = 0;
  for (const auto& r : recs) {
    correct += static_cast<double>(r.correct_count());
    blue_ok += r.inferred[r.slot_of(AgentType::blue)] == AgentType::blue ? 1 : 0;
    red_ok += r.inferred[r.slot_of(AgentType::red)] == AgentType::red ? 1 : 0;
  }
  const double n = static_cast<double>(recs.size());
  w.accuracy = correct / (2.0 * n);
  w.accuracy_blue = blue_ok / n;
  w.accuracy_red = red_ok / n;
  w.mutual_information = mutual_information(recs);
  for (const auto& m : rows) {
    w.mean_entropy_blue += m.entropy_blue;
    w.mean_entropy_red += m.entropy_red;
    w.mean_reward_interrogator += m.reward_interrogator;
    w.mean_reward_blue += m.reward_blue;
    w.mean_reward_red += m.reward_red;
  }
  const double k = static_cast<double>(std::max<std::size_t>(rows.size(), 1));
  w.mean_entropy_blue /= k;
  w.mean_entropy_red /= k;
  w.mean_reward_interrogator /= k;
  w.mean_reward_blue /= k;
  w.mean_reward_red /= k;
  return w;
}

inline nlohmann::json to_json(const WindowStats& w) {
  return {{"accuracy", w.accuracy},
          {"accuracy_blue", w.accuracy_blue},
          {"accuracy_red", w.accuracy_red},
          {"mutual_information", w.mutual_information},
          {"mean_entropy_blue", w.mean_entropy_blue},
          {"mean_entropy_red", w.mean_entropy_red},
          {"mean_reward_interrogator", w.mean_reward_interrogator},
          {"mean_reward_blue", w.mean_reward_blue},
          {"mean_reward_red", w.mean_reward_red}};
}

inline std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace detail

inline nlohmann::json summary_json(const RunResult& r) {
  return {{"experiment", r.config.experiment.id},
          {"experiment_name", r.config.experiment.name},
          {"seed", r.config.seed},
          {"label", std::string(to_string(r.label.outcome))},
          {"expected", std::string(to_string(r.config.experiment.expected))},
          {"matches_expected", r.label.outcome == r.config.experiment.expected},
          {"windowed_accuracy", r.label.accuracy},
          {"final_window", detail::to_json(r.final)},
          {"initial_window", detail::to_json(r.initial)},
          {"config", to_json(r.config)}};
}

struct RunOptions {
  /// Output directory; empty means keep everything in memory.
  std::filesystem::path out_dir;
  bool write_transcript = true;
  /// Progress lines every `progress_every` iterations when non-null.
  std::ostream* progress = nullptr;
  std::size_t progress_every = 100;
};

/// Executes T training iterations from freshly initialized players, writes
/// metrics.csv, transcript.jsonl and summary.json when an output directory
/// is given, and labels the final window.
inline RunResult run(const RunConfig& rc, const RunOptions& opts = {}) {
  rc.game.validate();
  if (rc.game.iterations == 0) throw ConfigError("iterations must be >= 1");

  std::optional<std::ofstream> metrics_out;
  std::optional<std::ofstream> transcript_out;
  if (!opts.out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(opts.out_dir, ec);
    if (ec) throw std::runtime_error("cannot create " + opts.out_dir.string() + ": " + ec.message());
    metrics_out = detail::open_for_write(opts.out_dir / "metrics.csv");
    *metrics_out << kMetricsHeader << '\n';
    if (opts.write_transcript) transcript_out = detail::open_for_write(opts.out_dir / "transcript.jsonl");
  }

  Players players = Players::init(rc.game, rc.seed);
  Trainer trainer(players, rc.game, rc.training);
  Rng rng(derive_seed(rc.seed, 1));
  PublicLog log;

  RunResult result;
  result.config = rc;
  result.rows.reserve(rc.game.iterations);
  for (std::uint64_t t = 0; t < rc.game.iterations; ++t) {
    IterationResult it;
    try {
      it = trainer.iteration(log, t, rng);
    } catch (const NumericError& e) {
      throw NumericError("iteration " + std::to_string(t) + ": " + e.what());
    }
    result.rows.push_back(it.metrics);
    if (metrics_out) *metrics_out << metrics_csv_line(it.metrics) << '\n';
    if (transcript_out) {
      for (const auto& r : log.since(t)) write_transcript_line(*transcript_out, r);
    }
    if (opts.progress != nullptr && (t + 1) % opts.progress_every == 0) {
      *opts.progress << "iter " << (t + 1) << " acc " << it.metrics.accuracy << " H_blue "
                     << it.metrics.entropy_blue << " H_red " << it.metrics.entropy_red << " MI "
                     << it.metrics.mutual_information << '\n';
    }
  }

  const std::size_t total = result.rows.size();
  const std::size_t window_iters =
      std::min<std::size_t>(total, static_cast<std::size_t>(std::ceil(rc.window * static_cast<double>(total))));
  const auto rows = std::span<const MetricsRow>(result.rows);
  const auto all = log.records();
  const auto late = log.since(total - window_iters);
  const auto early = all.first(all.size() - log.since(window_iters).size());
  result.final = detail::window_stats(late, rows.last(window_iters));
  result.initial = detail::window_stats(early, rows.first(window_iters));
  result.label = classify_equilibrium(accuracy_window(log, rc.window));

  if (!opts.out_dir.empty()) {
    for (auto* f : {&metrics_out, &transcript_out}) {
      if (*f) {
        (*f)->flush();
        if (!**f) throw std::runtime_error("write failed under " + opts.out_dir.string());
      }
    }
    auto summary = detail::open_for_write(opts.out_dir / "summary.json");
    summary << summary_json(result).dump(2) << '\n';
    if (!summary) throw std::runtime_error("cannot write " + (opts.out_dir / "summary.json").string());
  }
  return result;
}

}  // namespace imitation
