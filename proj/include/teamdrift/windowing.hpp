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
#include <deque>
#include <span>
#include <string>
#include <vector>

#include "teamdrift/core.hpp"

namespace teamdrift {

enum class WindowRole { classifier_window, stream_window, smoothing_window };

inline constexpr std::size_t kDefaultWindowSize = 3000;
inline constexpr double kDefaultDelta = 0.6;

// Bounded FIFO of embedded points with an incrementally maintained centroid.
//
// Appending beyond capacity evicts the oldest point. The running sum is
// rebuilt from scratch every `capacity` evictions so the centroid stays
// within 1e-9 of the batch mean on arbitrarily long streams.
class DataWindow {
 public:
  DataWindow(std::string id, std::size_t dim, std::size_t capacity = kDefaultWindowSize,
             WindowRole role = WindowRole::stream_window);

  // Returns true when the append evicted the oldest point.
  bool push(DataPoint point);
  void clear();

  // Sets the label on the member with this id; returns false if absent.
  bool set_label(const std::string& point_id, Label label, LabelSource source);

  const std::string& id() const { return id_; }
  std::size_t dim() const { return dim_; }
  std::size_t capacity() const { return capacity_; }
  WindowRole role() const { return role_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const std::deque<DataPoint>& points() const { return points_; }

  // Zero vector while empty.
  Vector centroid() const;
  Vector batch_centroid() const;

  // Bumped whenever labels enter the window (labeled push or relabel).
  // Evicting a labeled point does not count: it brings no new evidence.
  std::size_t labeled_revision() const { return labeled_revision_; }
  std::size_t labeled_count() const;

  // Bookkeeping needed to resume a window bit-exactly from a checkpoint.
  struct State {
    Vector sum;
    std::size_t evictions_since_rebuild = 0;
    std::size_t labeled_revision = 0;
  };
  State state() const { return {sum_, evictions_since_rebuild_, labeled_revision_}; }
  void restore(State state);

 private:
  void rebuild_sum();

  std::string id_;
  std::size_t dim_;
  std::size_t capacity_;
  WindowRole role_;
  std::deque<DataPoint> points_;
  Vector sum_;
  std::size_t evictions_since_rebuild_ = 0;
  std::size_t labeled_revision_ = 0;
};

enum class BandEstimate { empirical, gaussian };

struct DeltaBand {
  double delta = kDefaultDelta;
  double lo = 0.0;
  double hi = 1.0;
  BandEstimate estimate_kind = BandEstimate::empirical;

  bool degenerate() const { return lo == hi; }
  bool contains_closed(double dist) const { return dist >= lo && dist <= hi; }
  bool operator==(const DeltaBand&) const = default;
};

struct GaussianBandEstimate {
  double mu = 0.0;
  double sigma = 0.0;
};

GaussianBandEstimate estimate_gaussian(std::span<const double> distances);

// Cosine distance of every member to the window centroid, in window order.
std::vector<double> centroid_distances(const DataWindow& window);
std::vector<double> centroid_distances(std::span<const DataPoint> points,
                                       std::span<const double> centroid);

// Empirical quantile with linear interpolation between order statistics at
// plotting positions (i + 0.5) / N, clamped to the sample range. `sorted`
// must be ascending.
double empirical_quantile(std::span<const double> sorted, double q);

// Band holding `delta` of the sample mass, placed symmetrically around the
// median: [Q((1 - delta) / 2), Q((1 + delta) / 2)].
DeltaBand empirical_delta_band(std::span<const double> distances, double delta);

// Standard normal quantile function (inverse CDF).
double normal_quantile(double p);

// [mu - z sigma, mu + z sigma] with z = normal_quantile((1 + delta) / 2),
// clamped to [0, 1].
DeltaBand gaussian_delta_band(const GaussianBandEstimate& est, double delta);

// Volume of the d-dimensional ball of diameter 1.
double unit_hypersphere_volume(int d);

enum class BandMembership { inside, generalization, outside };

std::string_view to_string(BandMembership m);

// inside: lo < dist < hi (closed when the band is a single point);
// generalization: hi <= dist < lambda; outside otherwise.
// Throws ConfigError if lambda < band.hi.
BandMembership band_membership(const DeltaBand& band, double dist, double lambda);

}  // namespace teamdrift
