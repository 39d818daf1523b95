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

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "teamdrift/windowing.hpp"

namespace teamdrift {

inline constexpr std::size_t kDefaultBins = 32;
inline constexpr double kDefaultKlThreshold = 0.05;

// Discretized centroid-distance density over [0, 1].
struct DistanceHistogram {
  std::vector<double> bins;  // probabilities, sum to 1
  std::size_t count = 0;
};

// Uniform bins over [0, 1]; 1.0 belongs to the last bin.
// Throws InputError for distances outside [0, 1].
DistanceHistogram histogram(std::span<const double> distances, std::size_t bins = kDefaultBins);

// Replaces every zero bin of either histogram with the smallest nonzero
// probability found across both, then renormalizes each to sum 1.
std::pair<DistanceHistogram, DistanceHistogram> smooth_zero_bins(const DistanceHistogram& pa,
                                                                 const DistanceHistogram& pb);

// D_KL(pa || pb) in nats. Bins where both are zero contribute nothing; a bin
// that is zero on only one side throws ContractError (smooth first).
double kl_divergence(const DistanceHistogram& pa, const DistanceHistogram& pb);

struct DriftVerdict {
  double kl = 0.0;
  double threshold = kDefaultKlThreshold;
  bool drifted = false;
  std::string prior_id;
  std::string live_id;
};

struct DriftOptions {
  double delta = kDefaultDelta;
  double threshold = kDefaultKlThreshold;
  std::size_t bins = kDefaultBins;
};

// Centroid distances of the members of the window's own Δ-band (closed
// interval), so the comparison runs on each window's high-density region.
std::vector<double> band_member_distances(std::span<const double> distances, double delta);

// Compares the prior (classifier) window against the live stream window.
DriftVerdict detect_drift(const DataWindow& prior, const DataWindow& live,
                          const DriftOptions& opts = {});

// Same comparison on precomputed centroid distances.
DriftVerdict detect_drift(std::span<const double> prior_distances,
                          std::span<const double> live_distances, const DriftOptions& opts,
                          std::string prior_id = {}, std::string live_id = {});

// Tracks the live stream window and suppresses verdicts during the
// smoothing period that follows every rollover.
class DriftMonitor {
 public:
  // smoothing == 0 selects the default of capacity / 10.
  DriftMonitor(std::string id_prefix, std::size_t dim, std::size_t capacity, DriftOptions opts,
               std::size_t smoothing = 0);

  void observe(DataPoint point);

  // Starts a fresh live window; the next `smoothing_period()` points are the
  // smoothing period.
  void rollover();

  bool in_smoothing() const { return since_rollover_ < smoothing_; }
  std::size_t smoothing_period() const { return smoothing_; }
  const DataWindow& live() const { return live_; }

  // std::nullopt while smoothing or while the live window is empty.
  std::optional<DriftVerdict> check(const DataWindow& prior) const;


 private:
  std::string prefix_;
  std::size_t dim_;
  std::size_t capacity_;
  DriftOptions opts_;
  std::size_t smoothing_;
  std::size_t generation_ = 0;
  std::size_t since_rollover_ = 0;
  DataWindow live_;
};

}  // namespace teamdrift
