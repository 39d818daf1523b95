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

// Brute-force reference implementations shared by the unit tests and the
// acceptance binary. Each one is written for clarity, not speed, and avoids
// the helpers it is checking.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "teamdrift/corroborate.hpp"
#include "teamdrift/pool.hpp"

namespace teamdrift::oracle {

// All (point, event) pairs; a point keeps the nearest matching event, ties
// going to the smaller event id.
inline std::vector<LabelAssignment> assign_all_pairs(const std::vector<DataPoint>& points,
                                                     const std::vector<CorroborativeEvent>& events,
                                                     double pad) {
  std::map<std::string, LabelAssignment> best;
  for (const auto& p : points) {
    for (const auto& e : events) {
      if (!p.geo) continue;
      const bool in_time = static_cast<double>(p.ts) >= static_cast<double>(e.ts_start) - pad &&
                           static_cast<double>(p.ts) <= static_cast<double>(e.ts_end) + pad;
      if (!in_time) continue;
      const double km = haversine_km(*p.geo, {e.lat, e.lon});
      if (km > e.radius_km) continue;
      double dt = 0.0;
      if (p.ts < e.ts_start) dt = static_cast<double>(p.ts - e.ts_start);
      if (p.ts > e.ts_end) dt = static_cast<double>(p.ts - e.ts_end);
      const LabelAssignment cand{p.id, e.id, e.polarity, km, dt};
      auto it = best.find(p.id);
      if (it == best.end()) {
        best.emplace(p.id, cand);
      } else if (km < it->second.distance_km ||
                 (km == it->second.distance_km && e.id < it->second.event_id)) {
        it->second = cand;
      }
    }
  }
  std::vector<LabelAssignment> out;
  for (auto& [id, a] : best) out.push_back(a);
  return out;
}

struct RouteOutcome {
  std::vector<std::string> appended;
  std::vector<std::string> updated;
  bool general = false;
  std::map<std::string, double> distance;  // every model, by id
};

// Checks every model's band directly, in pool order, and sends x to general
// memory when no band holds it. Valid as a reference when the pool has at
// most k models.
inline RouteOutcome route_all_models(const std::vector<ModelRecord>& models, const DataPoint& x,
                                     const PoolConfig& cfg) {
  RouteOutcome out;
  struct Hit {
    double d;
    long created;
    std::string id;
    bool inside;
  };
  std::vector<Hit> hits;
  bool mem = false;
  for (const auto& m : models) {
    const auto c = m.memory.centroid();
    double xx = 0.0, cc = 0.0, xc = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      xx += x.vec[i] * x.vec[i];
      cc += c[i] * c[i];
      xc += x.vec[i] * c[i];
    }
    const double d = (xx == 0.0 || cc == 0.0) ? 0.5 : std::clamp((1.0 - xc / std::sqrt(xx * cc)) / 2.0, 0.0, 1.0);
    out.distance[m.id] = d;
    const double lambda = cfg.lambda ? std::max(*cfg.lambda, m.band.hi)
                                     : std::min(1.0, m.band.hi + cfg.lambda_margin);
    const bool inside = m.band.lo == m.band.hi ? d == m.band.lo : (d > m.band.lo && d < m.band.hi);
    const bool general = !inside && d >= m.band.hi && d < lambda;
    if (inside || general) hits.push_back({d, m.created_at, m.id, inside});
    mem = mem || inside;
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    if (a.d != b.d) return a.d < b.d;
    if (a.created != b.created) return a.created < b.created;
    return a.id < b.id;
  });
  for (const auto& h : hits) {
    out.appended.push_back(h.id);
    if (h.inside && x.is_corroborated()) out.updated.push_back(h.id);
  }
  out.general = !mem;
  return out;
}

}  // namespace teamdrift::oracle
