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

#include "teamdrift/core.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

namespace teamdrift {

std::string_view to_string(LabelSource source) {
  switch (source) {
    case LabelSource::ground_truth:
      return "ground_truth";
    case LabelSource::corroborative:
      return "corroborative";
    case LabelSource::predicted:
      return "predicted";
  }
  return "unknown";
}

LabelSource label_source_from_string(std::string_view name) {
  if (name == "ground_truth") return LabelSource::ground_truth;
  if (name == "corroborative") return LabelSource::corroborative;
  if (name == "predicted") return LabelSource::predicted;
  throw InputError("unknown label source '" + std::string(name) + "'");
}

void validate(const DataPoint& point, std::size_t dim) {
  if (point.vec.size() != dim) {
    throw InputError("point " + point.id + ": vector has dimension " +
                     std::to_string(point.vec.size()) + ", expected " + std::to_string(dim));
  }
  for (double v : point.vec) {
    if (!std::isfinite(v)) throw InputError("point " + point.id + ": non-finite vector component");
  }
  if (point.geo) {
    if (!(point.geo->lat >= -90.0 && point.geo->lat <= 90.0) ||
        !(point.geo->lon >= -180.0 && point.geo->lon <= 180.0)) {
      throw InputError("point " + point.id + ": coordinates out of range");
    }
  }
  if (point.label && !point.label_source) {
    throw InputError("point " + point.id + ": label without a label source");
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double l2_norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void normalize_in_place(Vector& v) {
  const double n = l2_norm(v);
  if (n > 0.0) {
    for (double& x : v) x /= n;
  }
}

DistanceResult cosine_distance_checked(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ContractError("cosine_distance: dimension mismatch (" + std::to_string(a.size()) +
                        " vs " + std::to_string(b.size()) + ")");
  }
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0.0 || bb == 0.0) return {0.5, true};
  double sim = ab / (std::sqrt(aa) * std::sqrt(bb));
  sim = std::clamp(sim, -1.0, 1.0);
  return {(1.0 - sim) / 2.0, false};
}

std::string format_timestamp(Timestamp ts) {
  using namespace std::chrono;
  const sys_seconds tp{seconds{ts}};
  const auto day = floor<days>(tp);
  const year_month_day ymd{day};
  const hh_mm_ss hms{tp - day};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()), int(hms.hours().count()),
                int(hms.minutes().count()), int(hms.seconds().count()));
  return buf;
}

std::string format_date(Timestamp ts) { return format_timestamp(ts).substr(0, 10); }

Timestamp parse_timestamp(std::string_view text) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  char tail = 0;
  const std::string copy(text);
  const int n = std::sscanf(copy.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c", &y, &mo, &d, &h, &mi, &s, &tail);
  if (n != 7 || tail != 'Z' || copy.size() != 20) {
    throw InputError("bad timestamp '" + copy + "' (expected YYYY-MM-DDTHH:MM:SSZ)");
  }
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{unsigned(mo)}, day{unsigned(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 60) throw InputError("bad timestamp '" + copy + "'");
  const sys_seconds tp = sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
  return tp.time_since_epoch().count();
}

}  // namespace teamdrift
