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
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "teamdrift/io.hpp"

namespace teamdrift {

enum class DriftSchedule { gradual, sudden, cyclic };

std::string_view to_string(DriftSchedule s);
DriftSchedule drift_schedule_from_string(std::string_view name);

// Two clusters in embedding space: irrelevant posts around one center and
// relevant posts around another, both sharing a common "keyword" direction.
// Drift moves the relevant center from its initial position toward a target
// that sits next to the irrelevant cluster and differs from it only along a
// fresh direction, so a frozen classifier reads drifted relevant posts as
// irrelevant while a refitted one can still separate them.
struct SyntheticConfig {
  DriftSchedule schedule = DriftSchedule::sudden;
  std::size_t windows = 6;
  std::size_t window_size = 3000;
  std::uint64_t seed = 0;
  std::size_t dim = 64;
  double jump = 0.6;   // sudden/cyclic drift offset, 1 = full move to the target
  double step = 0.25;  // gradual drift offset added per window
  double relevant_fraction = 0.3;
  double corroborative_fraction = 0.03;  // windows >= 1
  double bootstrap_fraction = 0.03;      // window 0
  double noise = 0.8;                    // mean noise norm relative to the unit center
  double burst_continue = 0.35;          // chance a physical event yields one more post
  Timestamp start = 1577836800;          // 2020-01-01T00:00:00Z
  double window_days = 30.0;
  double event_radius_km = kDefaultEventRadiusKm;
};

struct SyntheticStream {
  std::vector<StreamRecord> records;  // ground truth in StreamRecord::truth
  std::vector<CorroborativeEvent> events;
};

// Offset of the relevant center in window w: sudden jumps at windows / 2,
// gradual grows by `step` per window, cyclic alternates with period 2.
double drift_offset(const SyntheticConfig& cfg, std::size_t window);

SyntheticStream generate_synthetic(const SyntheticConfig& cfg);

// n points whose cosine distance to `center` is drawn from N(mean, sd)
// (clipped to [0, 1]), each in a random direction around the center.
std::vector<DataPoint> sample_shell(std::span<const double> center, double mean_distance,
                                    double sd, std::size_t n, std::mt19937_64& rng,
                                    const std::string& id_prefix);

// Random unit vector.
Vector random_unit(std::size_t dim, std::mt19937_64& rng);

}  // namespace teamdrift
