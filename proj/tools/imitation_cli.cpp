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

// Command-line front end: run one experiment, sweep seeds, check gradients,
// or summarize finished runs.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "imitation/imitation.hpp"

namespace fs = std::filesystem;
using namespace imitation;

namespace {

struct RunArgs {
  int experiment = 1;
  std::uint64_t seed = 1;
  std::optional<std::size_t> iterations;
  std::optional<std::size_t> batch;
  std::string out;
  std::string config;
  bool no_transcript = false;
  bool quiet = false;
};

RunConfig build_config(int experiment, std::uint64_t seed, const RunArgs& a) {
  RunConfig rc = make_run_config(experiment, seed);
  if (!a.config.empty()) apply_config_file(a.config, rc);
  rc.seed = seed;
  if (a.iterations) rc.game.iterations = *a.iterations;
  if (a.batch) rc.game.batch_size = *a.batch;
  rc.game.validate();
  return rc;
}

void print_summary(const RunResult& r) {
  std::printf("experiment %d (%s) seed %llu: %s (expected %s), windowed accuracy %.4f, MI %.4f bits\n",
              r.config.experiment.id, r.config.experiment.name.c_str(),
              static_cast<unsigned long long>(r.config.seed), std::string(to_string(r.label.outcome)).c_str(),
              std::string(to_string(r.config.experiment.expected)).c_str(), r.label.accuracy,
              r.final.mutual_information);
}

int cmd_run(const RunArgs& a) {
  const RunConfig rc = build_config(a.experiment, a.seed, a);
  RunOptions opts;
  opts.out_dir = a.out;
  opts.write_transcript = !a.no_transcript;
  opts.progress = a.quiet ? nullptr : &std::cerr;
  const auto start = std::chrono::steady_clock::now();
  const RunResult r = run(rc, opts);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  print_summary(r);
  std::printf("elapsed %.1f s\n", secs);
  return 0;
}

int cmd_sweep(const RunArgs& a, int seeds, int jobs) {
  if (seeds < 1) throw ConfigError("--seeds must be >= 1");
  std::vector<std::optional<RunResult>> results(static_cast<std::size_t>(seeds));
  std::mutex io;
  std::size_t next = 0;
  std::exception_ptr failure;
  auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard lock(io);
        if (next >= results.size() || failure) return;
        i = next++;
      }
      try {
        const std::uint64_t seed = a.seed + i;
        const RunConfig rc = build_config(a.experiment, seed, a);
        RunOptions opts;
        if (!a.out.empty()) opts.out_dir = fs::path(a.out) / ("exp" + std::to_string(a.experiment)) / ("seed" + std::to_string(seed));
        opts.write_transcript = !a.no_transcript;
        RunResult r = run(rc, opts);
        std::lock_guard lock(io);
        print_summary(r);
        std::fflush(stdout);
        results[i] = std::move(r);
      } catch (...) {
        std::lock_guard lock(io);
        failure = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int j = 0; j < std::max(1, jobs); ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  std::map<Outcome, int> votes;
  for (const auto& r : results) ++votes[r->label.outcome];
  Outcome majority = Outcome::undetermined;
  for (const auto& [o, n] : votes) {
    if (2 * n > seeds) majority = o;
  }
  const Outcome expected = results.front()->config.experiment.expected;
  std::printf("majority verdict: %s (expected %s) [pooling %d, separating %d, undetermined %d]\n",
              std::string(to_string(majority)).c_str(), std::string(to_string(expected)).c_str(),
              votes[Outcome::pooling], votes[Outcome::separating], votes[Outcome::undetermined]);
  return 0;
}

int cmd_gradcheck(int seeds, double eps, double tol) {
  const auto cases = run_gradcheck_suite(seeds, eps);
  std::map<std::string, double> worst;
  int failures = 0;
  for (const auto& c : cases) {
    worst[c.name] = std::max(worst[c.name], c.report.max_relative_error);
    if (!c.report.passed(tol)) {
      ++failures;
      std::printf("FAIL %-20s seed %llu: rel err %.3e (analytic %.9g, numeric %.9g)\n", c.name.c_str(),
                  static_cast<unsigned long long>(c.seed), c.report.max_relative_error,
                  c.report.worst_analytic, c.report.worst_numeric);
    }
  }
  for (const auto& [name, err] : worst) {
    std::printf("%-4s %-20s max rel err %.3e over %d seeds\n", err < tol ? "ok" : "FAIL", name.c_str(), err, seeds);
  }
  std::printf("%s: %zu cases, %d failures (tol %.1e, eps %.1e)\n", failures == 0 ? "PASS" : "FAIL",
              cases.size(), failures, tol, eps);
  return failures == 0 ? 0 : 1;
}

int cmd_report(const std::string& in) {
  std::vector<fs::path> summaries;
  if (fs::is_regular_file(fs::path(in) / "summary.json")) summaries.push_back(fs::path(in) / "summary.json");
  for (const auto& e : fs::recursive_directory_iterator(in)) {
    if (e.is_regular_file() && e.path().filename() == "summary.json" && e.path().parent_path() != fs::path(in)) {
      summaries.push_back(e.path());
    }
  }
  if (summaries.empty()) {
    std::fprintf(stderr, "no summary.json under %s\n", in.c_str());
    return 1;
  }
  std::sort(summaries.begin(), summaries.end());
  std::map<int, std::map<std::string, int>> votes;
  std::map<int, std::string> expected;
  std::printf("%-4s %-16s %-6s %-13s %-13s %-8s %-8s %-8s %-8s\n", "exp", "name", "seed", "label", "expected",
              "acc", "MI", "H_blue", "H_red");
  for (const auto& p : summaries) {
    std::ifstream f(p);
    const auto j = nlohmann::json::parse(f);
    const auto& fw = j.at("final_window");
    const int id = j.at("experiment").get<int>();
    std::printf("%-4d %-16s %-6llu %-13s %-13s %-8.4f %-8.4f %-8.4f %-8.4f\n", id,
                j.at("experiment_name").get<std::string>().c_str(),
                static_cast<unsigned long long>(j.at("seed").get<std::uint64_t>()),
                j.at("label").get<std::string>().c_str(), j.at("expected").get<std::string>().c_str(),
                j.at("windowed_accuracy").get<double>(), fw.at("mutual_information").get<double>(),
                fw.at("mean_entropy_blue").get<double>(), fw.at("mean_entropy_red").get<double>());
    ++votes[id][j.at("label").get<std::string>()];
    expected[id] = j.at("expected").get<std::string>();
  }
  if (summaries.size() > 1) {
    for (const auto& [id, v] : votes) {
      int total = 0;
      std::string majority = "undetermined";
      for (const auto& [label, n] : v) total += n;
      for (const auto& [label, n] : v) {
        if (2 * n > total) majority = label;
      }
      std::printf("experiment %d: majority %s over %d runs (expected %s)\n", id, majority.c_str(), total,
                  expected[id].c_str());
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-player adversarial signaling game with Seq2Seq actor-critic agents"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--experiment", run_args.experiment, "Experiment id (1..7)")->required()->check(CLI::Range(1, 7));
    sub->add_option("--iterations", run_args.iterations, "Training iterations T");
    sub->add_option("--batch", run_args.batch, "Rounds per iteration N");
    sub->add_option("--config", run_args.config, "key = value overrides file")->check(CLI::ExistingFile);
    sub->add_flag("--no-transcript", run_args.no_transcript, "Skip transcript.jsonl");
  };

  auto* run_cmd = app.add_subcommand("run", "Train one experiment for one seed");
  add_common(run_cmd);
  run_cmd->add_option("--seed", run_args.seed, "Random seed");
  run_cmd->add_option("--out", run_args.out, "Output directory")->required();
  run_cmd->add_flag("--quiet", run_args.quiet, "No progress output");

  int sweep_seeds = 5;
  int sweep_jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  auto* sweep_cmd = app.add_subcommand("sweep", "Run one experiment over several seeds and vote");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--seeds", sweep_seeds, "Number of seeds");
  sweep_cmd->add_option("--first-seed", run_args.seed, "Seed of the first run");
  sweep_cmd->add_option("--out", run_args.out, "Output root (exp<id>/seed<s>/ below it)");
  sweep_cmd->add_option("--jobs", sweep_jobs, "Concurrent runs");

  int gc_seeds = 10;
  double gc_eps = 1e-5;
  double gc_tol = 1e-4;
  auto* gc_cmd = app.add_subcommand("gradcheck", "Finite-difference check of every differentiable piece");
  gc_cmd->add_option("--seeds", gc_seeds, "Random instances per check");
  gc_cmd->add_option("--eps", gc_eps, "Central-difference step");
  gc_cmd->add_option("--tol", gc_tol, "Maximum relative error");

  std::string report_in;
  auto* report_cmd = app.add_subcommand("report", "Summarize finished runs");
  report_cmd->add_option("--in", report_in, "Run directory or sweep root")->required()->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(run_args);
    if (*sweep_cmd) return cmd_sweep(run_args, sweep_seeds, sweep_jobs);
    if (*gc_cmd) return cmd_gradcheck(gc_seeds, gc_eps, gc_tol);
    if (*report_cmd) return cmd_report(report_in);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
