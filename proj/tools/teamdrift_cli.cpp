// Copyright 2026 The teamdrift Authors.
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

// teamdrift command line: synthetic stream generation, replay, evaluation,
// and Δ-band diagnostics.
//
// Exit codes: 0 success, 1 input error, 2 config error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <unordered_map>

#include <CLI11.hpp>

#include "teamdrift/config.hpp"
#include "teamdrift/drift.hpp"
#include "teamdrift/io.hpp"
#include "teamdrift/pipeline.hpp"
#include "teamdrift/synthetic.hpp"
#include "teamdrift/windowing.hpp"

namespace fs = std::filesystem;
using namespace teamdrift;

namespace {

int run_gen(const SyntheticConfig& scfg, const fs::path& out) {
  const auto stream = generate_synthetic(scfg);
  fs::create_directories(out);
  {
    std::ofstream f(out / "stream.jsonl", std::ios::binary);
    write_stream(f, stream.records, true);
  }
  {
    std::ofstream f(out / "corroborative.jsonl", std::ios::binary);
    write_events(f, stream.events);
  }
  PipelineConfig cfg = synthetic_replay_config(scfg);
  cfg.stream = "stream.jsonl";
  cfg.corroborative = "corroborative.jsonl";
  {
    std::ofstream f(out / "replay.cfg", std::ios::binary);
    f << serialize_config(cfg);
  }
  std::printf("wrote %zu points and %zu corroborative events to %s\n", stream.records.size(),
              stream.events.size(), out.string().c_str());
  return 0;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

int run_replay(const std::string& stream_path, const std::string& events_path,
               const std::string& config_path, const fs::path& out) {
  PipelineConfig cfg = config_path.empty() ? PipelineConfig{} : load_config(config_path);
  const fs::path base = config_path.empty() ? fs::current_path() : fs::path(config_path).parent_path();
  const fs::path stream_file = !stream_path.empty() ? fs::path(stream_path) : resolve(base, cfg.stream);
  if (stream_file.empty()) throw ConfigError("no stream given (--stream or config 'stream')");
  const Embedder embedder(cfg.embedder);
  const auto stream = read_stream(stream_file, embedder);
  std::vector<CorroborativeEvent> events;
  if (!events_path.empty()) {
    events = read_events(events_path);
  } else if (!cfg.corroborative.empty()) {
    events = read_events(resolve(base, cfg.corroborative));
  }
  const auto result = replay(stream, events, cfg);
  write_run(out, result, cfg);
  for (const auto& line : result.log) std::printf("%s\n", line.c_str());
  std::printf("%zu detected events, %zu windows\n", result.events.size(), result.reports.size());
  return 0;
}

void print_reports(const std::vector<WindowReport>& reports) {
  auto opt = [](const std::optional<double>& v, const char* fmt) {
    char buf[32];
    if (!v) return std::string("NA");
    std::snprintf(buf, sizeof buf, fmt, *v);
    return std::string(buf);
  };
  std::printf("%-6s %9s %11s %9s %10s %13s %12s %10s %12s\n", "window", "static", "adaptive",
              "online", "unlabeled", "corroborative", "%labeled", "%of-unlab", "improvement");
  for (const auto& r : reports) {
    std::printf("%-6zu %9s %11s %9s %10zu %13zu %11.2f%% %10s %12s\n", r.window,
                opt(r.static_f1, "%.4f").c_str(), opt(r.adaptive_f1, "%.4f").c_str(),
                opt(r.online_f1, "%.4f").c_str(), r.unlabeled, r.corroborative, r.pct_labeled,
                opt(r.pct_of_unlabeled, "%.2f%%").c_str(), opt(r.improvement_pct, "%.1f%%").c_str());
  }
}

int run_eval(const fs::path& run_dir, const std::string& truth_path, std::size_t dim) {
  const auto scores = read_scores(run_dir / "scores.jsonl");
  EmbedderConfig ecfg;
  ecfg.dim = dim;
  if (fs::exists(run_dir / "config.txt")) ecfg = load_config(run_dir / "config.txt").embedder;
  const auto records = read_stream(truth_path, Embedder(ecfg));
  std::unordered_map<std::string, Label> truth;
  for (const auto& rec : records) {
    if (rec.truth) truth.emplace(rec.point.id, *rec.truth);
  }
  const auto reports = evaluate_windows(scores, truth);
  {
    std::ofstream f(run_dir / "eval_reports.csv", std::ios::binary);
    f << reports_csv(reports);
  }
  print_reports(reports);
  return 0;
}

int run_band(const std::string& window_path, double delta, const std::string& config_path) {
  const PipelineConfig cfg = config_path.empty() ? PipelineConfig{} : load_config(config_path);
  const auto records = read_stream(window_path, Embedder(cfg.embedder));
  if (records.empty()) throw InputError("window file holds no points");
  DataWindow window("band", cfg.embedder.dim, records.size(), WindowRole::smoothing_window);
  for (const auto& rec : records) window.push(rec.point);
  const auto distances = centroid_distances(window);
  const auto empirical = empirical_delta_band(distances, delta);
  const auto est = estimate_gaussian(distances);

  std::printf("%-28s %s\n", "points", std::to_string(window.size()).c_str());
  std::printf("%-28s %.6f\n", "delta", delta);
  std::printf("%-28s [%.6f, %.6f]\n", "empirical band", empirical.lo, empirical.hi);
  std::printf("%-28s %.6f\n", "mu", est.mu);
  std::printf("%-28s %.6f\n", "sigma", est.sigma);
  if (delta < 1.0) {
    const auto gauss = gaussian_delta_band(est, delta);
    std::printf("%-28s [%.6f, %.6f]\n", "gaussian band", gauss.lo, gauss.hi);
  }
  std::printf("\n%-6s %s\n", "d", "unit hypersphere volume");
  for (int d : {1, 2, 3, 5, 10, 20, 50, 100, static_cast<int>(cfg.embedder.dim)}) {
    std::printf("%-6d %.6e\n", d, unit_hypersphere_volume(d));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"teamdrift: drift-adaptive teamed-classifier event detection"};
  app.require_subcommand(1);

  SyntheticConfig scfg;
  std::string schedule = "sudden";
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "generate a synthetic drifting stream");
  gen->add_option("--schedule", schedule, "gradual | sudden | cyclic")
      ->check(CLI::IsMember({"gradual", "sudden", "cyclic"}));
  gen->add_option("--windows", scfg.windows, "number of windows")->required();
  gen->add_option("--seed", scfg.seed, "random seed");
  gen->add_option("--out", gen_out, "output directory")->required();
  gen->add_option("--window-size", scfg.window_size, "points per window");
  gen->add_option("--dim", scfg.dim, "embedding dimension");
  gen->add_option("--jump", scfg.jump, "sudden/cyclic drift magnitude");
  gen->add_option("--step", scfg.step, "gradual drift per window");
  gen->add_option("--noise", scfg.noise, "mean noise norm around class centers");
  gen->add_option("--relevant-fraction", scfg.relevant_fraction, "share of relevant posts");
  gen->add_option("--corroborative-fraction", scfg.corroborative_fraction,
                  "share of posts with a corroborative event (windows >= 1)");
  gen->add_option("--bootstrap-fraction", scfg.bootstrap_fraction,
                  "share of posts with a corroborative event in window 0");

  std::string stream_path, events_path, config_path, replay_out;
  auto* rep = app.add_subcommand("replay", "replay a stream through the adaptive pool");
  rep->add_option("--stream", stream_path, "stream JSONL");
  rep->add_option("--corroborative", events_path, "corroborative events JSONL");
  rep->add_option("--config", config_path, "key=value config file");
  rep->add_option("--out", replay_out, "output directory")->required();

  std::string run_dir, truth_path;
  std::size_t eval_dim = 300;
  auto* ev = app.add_subcommand("eval", "score a replay run against ground truth");
  ev->add_option("--run", run_dir, "replay output directory")->required();
  ev->add_option("--truth", truth_path, "stream JSONL carrying ground-truth labels")->required();
  ev->add_option("--dim", eval_dim, "embedding dimension when the run has no config.txt");

  std::string window_path, band_config;
  double delta = kDefaultDelta;
  auto* band = app.add_subcommand("band", "print Δ-band diagnostics for a window");
  band->add_option("--window", window_path, "window as stream JSONL")->required();
  band->add_option("--delta", delta, "probability mass of the band");
  band->add_option("--config", band_config, "config file (embedding settings)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) {
      scfg.schedule = drift_schedule_from_string(schedule);
      return run_gen(scfg, gen_out);
    }
    if (*rep) return run_replay(stream_path, events_path, config_path, replay_out);
    if (*ev) return run_eval(run_dir, truth_path, eval_dim);
    if (*band) return run_band(window_path, delta, band_config);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const InputError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 1;
  } catch (const ContractError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 1;
  }
  return 0;
}
