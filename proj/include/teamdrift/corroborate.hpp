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

#include <span>
#include <string>
#include <vector>

#include "teamdrift/core.hpp"

namespace teamdrift {

inline constexpr double kEarthRadiusKm = 6371.0088;
inline constexpr double kDefaultPadSeconds = 86400.0;
inline constexpr double kDefaultEventRadiusKm = 50.0;

// A trusted, delayed report of a physical event (or of its absence).
struct CorroborativeEvent {
  std::string id;
  Timestamp ts_start = 0;
  Timestamp ts_end = 0;
  double lat = 0.0;
  double lon = 0.0;
  double radius_km = kDefaultEventRadiusKm;
  Label polarity = Label::relevant;
  std::string source;
};

// Throws InputError on a broken invariant.
void validate(const CorroborativeEvent& event);

struct LabelAssignment {
  std::string point_id;
  std::string event_id;
  Label label = Label::relevant;
  double distance_km = 0.0;
  double dt_seconds = 0.0;  // signed offset of the point from the event span, 0 inside it
};

// Great-circle distance on a sphere of radius kEarthRadiusKm.
double haversine_km(const GeoPoint& a, const GeoPoint& b);

// True when the point falls inside the event's disc and its padded span.
bool matches(const DataPoint& point, const CorroborativeEvent& event, double pad_seconds);

// Labels each geotagged point by the nearest matching event (ties go to the
// smaller event id). The result is ordered by point id.
std::vector<LabelAssignment> assign_labels(std::span<const DataPoint> points,
                                           std::span<const CorroborativeEvent> events,
                                           double pad_seconds = kDefaultPadSeconds);

// |assignments| / |points|.
double label_fraction(std::size_t points, std::size_t assignments);

}  // namespace teamdrift
