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

#include "teamdrift/windowing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace teamdrift {

DataWindow::DataWindow(std::string id, std::size_t dim, std::size_t capacity, WindowRole role)
    : id_(std::move(id)), dim_(dim), capacity_(capacity), role_(role), sum_(dim, 0.0) {
  if (capacity_ == 0) throw ConfigError("window capacity must be positive");
}

bool DataWindow::push(DataPoint point) {
  if (point.vec.size() != dim_) {
    throw ContractError("window " + id_ + ": point " + point.id + " has wrong dimension");
  }
  for (std::size_t i = 0; i < dim_; ++i) sum_[i] += point.vec[i];
  if (point.label) ++labeled_revision_;
  points_.push_back(std::move(point));
  if (points_.size() <= capacity_) return false;

  const DataPoint& oldest = points_.front();
  for (std::size_t i = 0; i < dim_; ++i) sum_[i] -= oldest.vec[i];
  points_.pop_front();
  if (++evictions_since_rebuild_ >= capacity_) rebuild_sum();
  return true;
}

void DataWindow::clear() {
  points_.clear();
  std::fill(sum_.begin(), sum_.end(), 0.0);
  evictions_since_rebuild_ = 0;
}

bool DataWindow::set_label(const std::string& point_id, Label label, LabelSource source) {
  bool found = false;
  for (auto& p : points_) {
    if (p.id != point_id) continue;
    if (p.label != label || p.label_source != source) {
      p.label = label;
      p.label_source = source;
      ++labeled_revision_;
    }
    found = true;
  }
  return found;
}

std::size_t DataWindow::labeled_count() const {
  return static_cast<std::size_t>(
      std::count_if(points_.begin(), points_.end(), [](const DataPoint& p) { return p.label.has_value(); }));
}

Vector DataWindow::centroid() const {
  Vector c(dim_, 0.0);
  if (points_.empty()) return c;
  const double n = static_cast<double>(points_.size());
  for (std::size_t i = 0; i < dim_; ++i) c[i] = sum_[i] / n;
  return c;
}

Vector DataWindow::batch_centroid() const {
  Vector c(dim_, 0.0);
  if (points_.empty()) return c;
  for (const auto& p : points_) {
    for (std::size_t i = 0; i < dim_; ++i) c[i] += p.vec[i];
  }
  for (double& x : c) x /= static_cast<double>(points_.size());
  return c;
}

void DataWindow::restore(State state) {
  if (state.sum.size() != dim_) throw ContractError("window " + id_ + ": bad restored sum");
  sum_ = std::move(state.sum);
  evictions_since_rebuild_ = state.evictions_since_rebuild;
  labeled_revision_ = state.labeled_revision;
}

void DataWindow::rebuild_sum() {
  std::fill(sum_.begin(), sum_.end(), 0.0);
  for (const auto& p : points_) {
    for (std::size_t i = 0; i < dim_; ++i) sum_[i] += p.vec[i];
  }
  evictions_since_rebuild_ = 0;
}

GaussianBandEstimate estimate_gaussian(std::span<const double> distances) {
  if (distances.empty()) throw ContractError("estimate_gaussian: empty sample");
  double mean = 0.0;
  for (double d : distances) mean += d;
  mean /= static_cast<double>(distances.size());
  double ss = 0.0;
  for (double d : distances) ss += (d - mean) * (d - mean);
  return {mean, std::sqrt(ss / static_cast<double>(distances.size()))};
}

std::vector<double> centroid_distances(std::span<const DataPoint> points,
                                       std::span<const double> centroid) {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(cosine_distance(p.vec, centroid));
  return out;
}

std::vector<double> centroid_distances(const DataWindow& window) {
  const Vector c = window.centroid();
  std::vector<double> out;
  out.reserve(window.size());
  for (const auto& p : window.points()) out.push_back(cosine_distance(p.vec, c));
  return out;
}

double empirical_quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw ContractError("empirical_quantile: empty sample");
  const double n = static_cast<double>(sorted.size());
  const double h = n * q - 0.5;
  if (h <= 0.0) return sorted.front();
  if (h >= n - 1.0) return sorted.back();
  const auto i = static_cast<std::size_t>(std::floor(h));
  const double frac = h - static_cast<double>(i);
  return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

DeltaBand empirical_delta_band(std::span<const double> distances, double delta) {
  if (distances.empty()) throw ContractError("empirical_delta_band: empty sample");
  if (!(delta > 0.0 && delta <= 1.0)) throw ConfigError("delta must lie in (0, 1]");
  std::vector<double> sorted(distances.begin(), distances.end());
  std::sort(sorted.begin(), sorted.end());
  DeltaBand band;
  band.delta = delta;
  band.estimate_kind = BandEstimate::empirical;
  band.lo = empirical_quantile(sorted, (1.0 - delta) / 2.0);
  band.hi = empirical_quantile(sorted, (1.0 + delta) / 2.0);
  return band;
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ContractError("normal_quantile: p must lie in (0, 1)");
  // Acklam's rational approximation, then one Halley step against erfc.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x = 0.0;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);
}

DeltaBand gaussian_delta_band(const GaussianBandEstimate& est, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("gaussian band: delta must lie in (0, 1)");
  const double z = normal_quantile((1.0 + delta) / 2.0);
  DeltaBand band;
  band.delta = delta;
  band.estimate_kind = BandEstimate::gaussian;
  band.lo = std::clamp(est.mu - z * est.sigma, 0.0, 1.0);
  band.hi = std::clamp(est.mu + z * est.sigma, 0.0, 1.0);
  return band;
}

double unit_hypersphere_volume(int d) {
  if (d < 1) throw ContractError("unit_hypersphere_volume: d must be >= 1");
  const double half = 0.5 * d;
  return std::exp(d * std::log(0.5) + half * std::log(std::numbers::pi) - std::lgamma(half + 1.0));
}

std::string_view to_string(BandMembership m) {
  switch (m) {
    case BandMembership::inside:
      return "inside";
    case BandMembership::generalization:
      return "generalization";
    case BandMembership::outside:
      return "outside";
  }
  return "unknown";
}

BandMembership band_membership(const DeltaBand& band, double dist, double lambda) {
  if (lambda < band.hi) throw ConfigError("lambda must not lie below the band's upper bound");
  if (band.degenerate() ? dist == band.lo : (band.lo < dist && dist < band.hi)) {
    return BandMembership::inside;
  }
  if (band.hi <= dist && dist < lambda) return BandMembership::generalization;
  return BandMembership::outside;
}

}  // namespace teamdrift
