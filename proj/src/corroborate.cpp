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

#include "teamdrift/corroborate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace teamdrift {

void validate(const CorroborativeEvent& event) {
  if (event.ts_start > event.ts_end) throw InputError("event " + event.id + ": ts_start > ts_end");
  if (!(event.radius_km > 0.0 && event.radius_km <= 1000.0)) {
    throw InputError("event " + event.id + ": radius_km must lie in (0, 1000]");
  }
  if (!(event.lat >= -90.0 && event.lat <= 90.0) || !(event.lon >= -180.0 && event.lon <= 180.0)) {
    throw InputError("event " + event.id + ": coordinates out of range");
  }
}

double haversine_km(const GeoPoint& a, const GeoPoint& b) {
  constexpr double rad = std::numbers::pi / 180.0;
  const double dlat = (b.lat - a.lat) * rad;
  const double dlon = (b.lon - a.lon) * rad;
  const double s = std::sin(dlat / 2.0);
  const double t = std::sin(dlon / 2.0);
  const double h = s * s + std::cos(a.lat * rad) * std::cos(b.lat * rad) * t * t;
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

namespace {

double time_offset(Timestamp ts, const CorroborativeEvent& e) {
  if (ts < e.ts_start) return static_cast<double>(ts - e.ts_start);
  if (ts > e.ts_end) return static_cast<double>(ts - e.ts_end);
  return 0.0;
}

}  // namespace

bool matches(const DataPoint& point, const CorroborativeEvent& event, double pad_seconds) {
  if (!point.geo) return false;
  if (std::abs(time_offset(point.ts, event)) > pad_seconds) return false;
  return haversine_km(*point.geo, {event.lat, event.lon}) <= event.radius_km;
}

std::vector<LabelAssignment> assign_labels(std::span<const DataPoint> points,
                                           std::span<const CorroborativeEvent> events,
                                           double pad_seconds) {
  std::vector<LabelAssignment> out;
  for (const auto& p : points) {
    if (!p.geo) continue;
    const CorroborativeEvent* best = nullptr;
    double best_km = 0.0;
    for (const auto& e : events) {
      if (std::abs(time_offset(p.ts, e)) > pad_seconds) continue;
      const double km = haversine_km(*p.geo, {e.lat, e.lon});
      if (km > e.radius_km) continue;
      if (best == nullptr || km < best_km || (km == best_km && e.id < best->id)) {
        best = &e;
        best_km = km;
      }
    }
    if (best != nullptr) {
      out.push_back({p.id, best->id, best->polarity, best_km, time_offset(p.ts, *best)});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const LabelAssignment& a, const LabelAssignment& b) { return a.point_id < b.point_id; });
  return out;
}

double label_fraction(std::size_t points, std::size_t assignments) {
  if (points == 0) throw ContractError("label_fraction: no points");
  return static_cast<double>(assignments) / static_cast<double>(points);
}

}  // namespace teamdrift
