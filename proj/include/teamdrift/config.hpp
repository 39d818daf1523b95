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

#include <cstdint>
#include <filesystem>
#include <string>

#include "teamdrift/drift.hpp"
#include "teamdrift/embed.hpp"
#include "teamdrift/ensemble.hpp"
#include "teamdrift/pool.hpp"

namespace teamdrift {

// Every knob of a replay run. Serialized as a flat key=value text file.
struct PipelineConfig {
  std::size_t window_size = kDefaultWindowSize;
  double delta = kDefaultDelta;
  double kl_threshold = kDefaultKlThreshold;
  std::size_t bins = kDefaultBins;
  std::size_t smoothing = 0;  // points; 0 selects window_size / 10
  std::size_t k = 5;
  std::optional<double> lambda;  // unset: band.hi + lambda_margin
  double lambda_margin = 0.05;
  std::size_t min_train = 50;
  double learn_rate = 0.1;
  std::size_t epochs = 20;
  std::size_t general_capacity = kDefaultWindowSize;
  TeamWeighting weighting = TeamWeighting::proximity;
  double pad_seconds = 86400.0;
  EmbedderConfig embedder;
  std::uint64_t seed = 0;
  std::string stream;
  std::string corroborative;
  std::string knowledgebase = "knowledgebase.jsonl";
  std::string reports = "reports.csv";

  PoolConfig pool() const;
  DriftOptions drift() const;
  std::size_t smoothing_points() const;
  bool operator==(const PipelineConfig&) const = default;
};

// Throws ConfigError on out-of-range values.
void validate(const PipelineConfig& cfg);

// Parses key=value lines; '#' starts a comment. Unknown keys and malformed
// values throw ConfigError.
PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::filesystem::path& path);

// Emits every key; parse_config(serialize_config(c)) == c.
std::string serialize_config(const PipelineConfig& cfg);

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace teamdrift
