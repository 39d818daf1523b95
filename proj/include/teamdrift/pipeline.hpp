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

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "teamdrift/config.hpp"
#include "teamdrift/ensemble.hpp"
#include "teamdrift/io.hpp"
#include "teamdrift/synthetic.hpp"

namespace teamdrift {

// ---- integrated knowledgebase ----------------------------------------------

struct PositivePoint {
  std::string id;
  Timestamp ts = 0;
  std::optional<GeoPoint> geo;
  double probability = 0.0;
};

// Positives grouped by 1°x1° cell and UTC day.
struct DetectedEvent {
  std::string cell;  // "lat,lon" of the cell's south-west corner, or "global"
  std::string date;  // YYYY-MM-DD
  std::vector<std::string> point_ids;
  Timestamp first_ts = 0;
  Timestamp last_ts = 0;
  double mean_probability = 0.0;
  std::optional<GeoPoint> centroid_geo;
};

std::string cell_id(const std::optional<GeoPoint>& geo);

// Events ordered by (date, cell); point ids in arrival order.
std::vector<DetectedEvent> aggregate_events(std::span<const PositivePoint> positives);

// posts per event -> number of events
std::map<std::size_t, std::size_t> posts_per_event(std::span<const DetectedEvent> events);

// ---- evaluation ------------------------------------------------------------

// Probabilities for one stream point. `online` is the real-time team output;
// `adaptive` and `frozen` are the live and frozen window-0 pools re-scored
// after the point's window was maintained.
struct PointScore {
  std::string id;
  std::size_t window = 0;
  std::optional<double> online;
  std::optional<double> frozen;
  std::optional<double> adaptive;
  bool corroborated = false;
};

struct WindowReport {
  std::size_t window = 0;
  std::optional<double> static_f1;
  std::optional<double> adaptive_f1;
  std::optional<double> online_f1;
  std::size_t unlabeled = 0;
  std::size_t corroborative = 0;
  double pct_labeled = 0.0;                    // 100 * corroborative / all points
  std::optional<double> pct_of_unlabeled;      // 100 * corroborative / unlabeled
  std::optional<double> improvement_pct;       // 100 * adaptive / static
};

std::optional<double> improvement_pct(double static_f1, double adaptive_f1);

// Per-window f-scores against ground truth; windows whose points lack
// truth get empty scores.
std::vector<WindowReport> evaluate_windows(std::span<const PointScore> scores,
                                           const std::unordered_map<std::string, Label>& truth);

// ---- replay ----------------------------------------------------------------

struct VerdictRecord {
  Timestamp ts = 0;
  std::size_t window = 0;
  DriftVerdict verdict;
};

struct DecisionRecord {
  TeamSelection team;
  TeamPrediction prediction;
};

struct ReplayResult {
  std::vector<DetectedEvent> events;
  std::vector<PointScore> scores;
  std::vector<DecisionRecord> decisions;
  std::vector<VerdictRecord> verdicts;
  std::vector<WindowReport> reports;
  std::vector<std::string> log;
  std::unique_ptr<Pool> pool;
  std::unique_ptr<Pool> frozen;
};

// Drives the stream through the pool one point at a time and maintains the
// pool at each window boundary. Window 0 bootstraps the pool and emits no
// predictions. Ground truth in the records is used for reports only.
ReplayResult replay(std::span<const StreamRecord> stream,
                    std::span<const CorroborativeEvent> events, const PipelineConfig& cfg);

// Writes knowledgebase, reports, posts-per-event histogram, decision and
// verdict logs, per-point scores, the final pool checkpoint, and the run log.
void write_run(const std::filesystem::path& dir, const ReplayResult& result,
               const PipelineConfig& cfg);

// Replay settings for a generated stream: window size and dimension from the
// generator, and a learner strong enough to fit unit-norm embeddings
// (learn_rate 2, 300 epochs).
PipelineConfig synthetic_replay_config(const SyntheticConfig& scfg);

std::string reports_csv(std::span<const WindowReport> reports);
std::vector<PointScore> read_scores(const std::filesystem::path& path);

}  // namespace teamdrift
