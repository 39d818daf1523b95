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

#include "teamdrift/drift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace teamdrift {

DistanceHistogram histogram(std::span<const double> distances, std::size_t bins) {
  if (distances.empty()) throw InputError("histogram: empty distance list");
  if (bins < 2) throw ConfigError("histogram: need at least two bins");
  std::vector<std::size_t> counts(bins, 0);
  for (double d : distances) {
    if (!(d >= 0.0 && d <= 1.0)) throw InputError("histogram: distance outside [0, 1]");
    const auto b = std::min(bins - 1, static_cast<std::size_t>(d * static_cast<double>(bins)));
    ++counts[b];
  }
  DistanceHistogram h;
  h.count = distances.size();
  h.bins.resize(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    h.bins[i] = static_cast<double>(counts[i]) / static_cast<double>(h.count);
  }
  return h;
}

std::pair<DistanceHistogram, DistanceHistogram> smooth_zero_bins(const DistanceHistogram& pa,
                                                                 const DistanceHistogram& pb) {
  if (pa.bins.size() != pb.bins.size()) throw ContractError("smooth_zero_bins: bin count mismatch");
  double floor_p = std::numeric_limits<double>::infinity();
  for (const auto* h : {&pa, &pb}) {
    for (double p : h->bins) {
      if (p > 0.0) floor_p = std::min(floor_p, p);
    }
  }
  if (!std::isfinite(floor_p)) throw InputError("smooth_zero_bins: both histograms are empty");

  auto smooth = [floor_p](const DistanceHistogram& h) {
    DistanceHistogram out = h;
    double total = 0.0;
    for (double& p : out.bins) {
      if (p == 0.0) p = floor_p;
      total += p;
    }
    for (double& p : out.bins) p /= total;
    return out;
  };
  return {smooth(pa), smooth(pb)};
}

double kl_divergence(const DistanceHistogram& pa, const DistanceHistogram& pb) {
  if (pa.bins.size() != pb.bins.size()) throw ContractError("kl_divergence: bin count mismatch");
  double kl = 0.0;
  for (std::size_t i = 0; i < pa.bins.size(); ++i) {
    const double a = pa.bins[i];
    const double b = pb.bins[i];
    if (a == 0.0 && b == 0.0) continue;
    if (a == 0.0 || b == 0.0) {
      throw ContractError("kl_divergence: bin " + std::to_string(i) +
                          " is zero on one side only; smooth the histograms first");
    }
    kl += a * std::log(a / b);
  }
  return std::max(kl, 0.0);
}

std::vector<double> band_member_distances(std::span<const double> distances, double delta) {
  const DeltaBand band = empirical_delta_band(distances, delta);
  std::vector<double> members;
  members.reserve(distances.size());
  for (double d : distances) {
    if (band.contains_closed(d)) members.push_back(d);
  }
  return members;
}

DriftVerdict detect_drift(std::span<const double> prior_distances,
                          std::span<const double> live_distances, const DriftOptions& opts,
                          std::string prior_id, std::string live_id) {
  const auto prior_members = band_member_distances(prior_distances, opts.delta);
  const auto live_members = band_member_distances(live_distances, opts.delta);
  const auto [pa, pb] = smooth_zero_bins(histogram(prior_members, opts.bins),
                                         histogram(live_members, opts.bins));
  DriftVerdict v;
  v.kl = kl_divergence(pa, pb);
  v.threshold = opts.threshold;
  v.drifted = v.kl > opts.threshold;
  v.prior_id = std::move(prior_id);
  v.live_id = std::move(live_id);
  return v;
}

DriftVerdict detect_drift(const DataWindow& prior, const DataWindow& live, const DriftOptions& opts) {
  if (prior.empty() || live.empty()) throw ContractError("detect_drift: empty window");
  return detect_drift(centroid_distances(prior), centroid_distances(live), opts, prior.id(), live.id());
}

DriftMonitor::DriftMonitor(std::string id_prefix, std::size_t dim, std::size_t capacity,
                           DriftOptions opts, std::size_t smoothing)
    : prefix_(std::move(id_prefix)),
      dim_(dim),
      capacity_(capacity),
      opts_(opts),
      smoothing_(smoothing == 0 ? std::max<std::size_t>(1, capacity / 10) : smoothing),
      live_(prefix_ + "-0", dim, capacity, WindowRole::stream_window) {}

void DriftMonitor::observe(DataPoint point) {
  live_.push(std::move(point));
  ++since_rollover_;
}

void DriftMonitor::rollover() {
  ++generation_;
  live_ = DataWindow(prefix_ + "-" + std::to_string(generation_), dim_, capacity_,
                     WindowRole::stream_window);
  since_rollover_ = 0;
}

std::optional<DriftVerdict> DriftMonitor::check(const DataWindow& prior) const {
  if (in_smoothing() || live_.empty() || prior.empty()) return std::nullopt;
  return detect_drift(prior, live_, opts_);
}

}  // namespace teamdrift
