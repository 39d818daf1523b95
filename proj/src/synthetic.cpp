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

#include "teamdrift/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace teamdrift {

std::string_view to_string(DriftSchedule s) {
  switch (s) {
    case DriftSchedule::gradual:
      return "gradual";
    case DriftSchedule::sudden:
      return "sudden";
    case DriftSchedule::cyclic:
      return "cyclic";
  }
  return "unknown";
}

DriftSchedule drift_schedule_from_string(std::string_view name) {
  if (name == "gradual") return DriftSchedule::gradual;
  if (name == "sudden") return DriftSchedule::sudden;
  if (name == "cyclic") return DriftSchedule::cyclic;
  throw ConfigError("unknown drift schedule '" + std::string(name) + "'");
}

double drift_offset(const SyntheticConfig& cfg, std::size_t window) {
  switch (cfg.schedule) {
    case DriftSchedule::gradual:
      return cfg.step * static_cast<double>(window);
    case DriftSchedule::sudden:
      return window >= cfg.windows / 2 ? cfg.jump : 0.0;
    case DriftSchedule::cyclic:
      return window % 2 == 1 ? cfg.jump : 0.0;
  }
  return 0.0;
}

Vector random_unit(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vector v(dim);
  do {
    for (double& x : v) x = normal(rng);
  } while (l2_norm(v) == 0.0);
  normalize_in_place(v);
  return v;
}

namespace {

// Gram-Schmidt over freshly drawn Gaussian vectors.
std::vector<Vector> orthonormal_basis(std::size_t count, std::size_t dim, std::mt19937_64& rng) {
  std::vector<Vector> basis;
  while (basis.size() < count) {
    Vector v = random_unit(dim, rng);
    for (const auto& b : basis) {
      const double proj = dot(v, b);
      for (std::size_t i = 0; i < dim; ++i) v[i] -= proj * b[i];
    }
    if (l2_norm(v) < 1e-6) continue;
    normalize_in_place(v);
    basis.push_back(std::move(v));
  }
  return basis;
}

Vector combine(std::initializer_list<std::pair<double, const Vector*>> terms) {
  Vector out(terms.begin()->second->size(), 0.0);
  for (const auto& [w, v] : terms) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * (*v)[i];
  }
  normalize_in_place(out);
  return out;
}

double quantize(double v) { return std::round(v * 1e6) / 1e6; }

// Unit vector around `center` with Gaussian noise of norm ~ `scale`,
// quantized to six decimals so it survives a JSON round trip unchanged.
Vector noisy(const Vector& center, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  const double per_dim = scale / std::sqrt(static_cast<double>(center.size()));
  Vector v(center);
  for (double& x : v) x += per_dim * normal(rng);
  normalize_in_place(v);
  for (double& x : v) x = quantize(x);
  return v;
}

constexpr const char* kRelevantWords[] = {"landslide", "mudslide", "debris",  "slope",
                                          "collapse",  "road",     "blocked", "evacuated",
                                          "rain",      "flooding", "rescue",  "village"};
constexpr const char* kIrrelevantWords[] = {"landslide", "victory", "election", "song",
                                            "fleetwood", "mac",     "cream",    "drink",
                                            "parade",    "vote",    "win",      "concert"};

std::string make_text(bool relevant, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(5, 9);
  std::uniform_int_distribution<std::size_t> pick(0, 11);
  const auto* words = relevant ? kRelevantWords : kIrrelevantWords;
  std::string text = words[0];
  for (int i = 1, n = len(rng); i < n; ++i) {
    text += ' ';
    text += words[pick(rng)];
  }
  return text;
}

struct Draft {
  Timestamp ts;
  GeoPoint geo;
  bool relevant;
  std::size_t order;
  bool corroborated;
};

double clamp_lon(double lon) {
  if (lon > 180.0) return lon - 360.0;
  if (lon < -180.0) return lon + 360.0;
  return lon;
}

}  // namespace

std::vector<DataPoint> sample_shell(std::span<const double> center, double mean_distance,
                                    double sd, std::size_t n, std::mt19937_64& rng,
                                    const std::string& id_prefix) {
  Vector c(center.begin(), center.end());
  normalize_in_place(c);
  std::normal_distribution<double> normal(mean_distance, sd);
  std::vector<DataPoint> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::clamp(normal(rng), 0.0, 1.0);
    const double cos_t = 1.0 - 2.0 * r;
    const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
    Vector u = random_unit(c.size(), rng);
    const double proj = dot(u, c);
    for (std::size_t k = 0; k < u.size(); ++k) u[k] -= proj * c[k];
    normalize_in_place(u);
    DataPoint p;
    p.id = id_prefix + std::to_string(i);
    p.vec.resize(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) p.vec[k] = cos_t * c[k] + sin_t * u[k];
    out.push_back(std::move(p));
  }
  return out;
}

SyntheticStream generate_synthetic(const SyntheticConfig& cfg) {
  if (cfg.windows < 2) throw ConfigError("synthetic stream needs at least two windows");
  if (cfg.dim < 4) throw ConfigError("synthetic stream needs dim >= 4");
  if (!(cfg.relevant_fraction > 0.0 && cfg.relevant_fraction < 1.0)) {
    throw ConfigError("relevant_fraction must lie in (0, 1)");
  }
  std::mt19937_64 rng(cfg.seed);
  const auto basis = orthonormal_basis(4, cfg.dim, rng);
  const Vector& common = basis[0];
  const Vector& irrelevant_dir = basis[1];
  const Vector& relevant_dir = basis[2];
  const Vector& fresh_dir = basis[3];
  const Vector irrelevant_center = combine({{1.0, &common}, {1.0, &irrelevant_dir}});
  const Vector relevant_start = combine({{1.0, &common}, {1.0, &relevant_dir}});
  const Vector relevant_target = combine({{1.0, &common}, {1.0, &irrelevant_dir}, {1.0, &fresh_dir}});

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> jitter(-0.05, 0.05);
  const auto span_seconds = static_cast<Timestamp>(cfg.window_days * 86400.0);
  const auto relevant_per_window =
      static_cast<std::size_t>(std::llround(cfg.relevant_fraction * static_cast<double>(cfg.window_size)));

  SyntheticStream out;
  std::size_t next_point = 0;
  std::size_t next_event = 0;
  for (std::size_t w = 0; w < cfg.windows; ++w) {
    const double offset = drift_offset(cfg, w);
    const Vector relevant_center =
        combine({{1.0 - offset, &relevant_start}, {offset, &relevant_target}});
    const Timestamp begin = cfg.start + static_cast<Timestamp>(w) * span_seconds;
    auto uniform_ts = [&] { return begin + static_cast<Timestamp>(unit(rng) * (span_seconds - 1)); };
    auto uniform_geo = [&] { return GeoPoint{-55.0 + 125.0 * unit(rng), -180.0 + 360.0 * unit(rng)}; };

    const double fraction = w == 0 ? cfg.bootstrap_fraction : cfg.corroborative_fraction;
    auto emit_event = [&](Timestamp ts_start, Timestamp ts_end, GeoPoint site, Label polarity) {
      char eid[32];
      std::snprintf(eid, sizeof eid, "e%06zu", next_event++);
      out.events.push_back({.id = eid,
                            .ts_start = ts_start,
                            .ts_end = ts_end,
                            .lat = quantize(site.lat),
                            .lon = quantize(site.lon),
                            .radius_km = cfg.event_radius_km,
                            .polarity = polarity,
                            .source = polarity == Label::relevant ? "synthetic-hazard-feed"
                                                                  : "synthetic-news-debunk"});
    };

    std::vector<Draft> drafts;
    drafts.reserve(cfg.window_size);
    // Relevant posts come in small bursts around one physical event each. A
    // corroborated burst gets a single event covering all of its posts.
    while (drafts.size() < relevant_per_window) {
      const GeoPoint site = uniform_geo();
      const Timestamp t0 = uniform_ts();
      const bool corroborated = unit(rng) < fraction;
      if (corroborated) emit_event(t0 - 43200, t0 + 6 * 3600 + 43200, site, Label::relevant);
      do {
        const Timestamp ts = std::min<Timestamp>(begin + span_seconds - 1,
                                                 t0 + static_cast<Timestamp>(unit(rng) * 6 * 3600));
        const GeoPoint geo{std::clamp(site.lat + jitter(rng), -90.0, 90.0), clamp_lon(site.lon + jitter(rng))};
        drafts.push_back({ts, geo, true, drafts.size(), corroborated});
      } while (drafts.size() < relevant_per_window && unit(rng) < cfg.burst_continue);
    }
    while (drafts.size() < cfg.window_size) {
      drafts.push_back({uniform_ts(), uniform_geo(), false, drafts.size(), unit(rng) < fraction});
    }
    std::sort(drafts.begin(), drafts.end(), [](const Draft& a, const Draft& b) {
      return a.ts != b.ts ? a.ts < b.ts : a.order < b.order;
    });

    for (const auto& d : drafts) {
      StreamRecord rec;
      char id[32];
      std::snprintf(id, sizeof id, "p%07zu", next_point++);
      rec.point.id = id;
      rec.point.ts = d.ts;
      rec.point.geo = GeoPoint{quantize(d.geo.lat), quantize(d.geo.lon)};
      rec.point.text = make_text(d.relevant, rng);
      const double scale = cfg.noise * (0.5 + unit(rng));
      rec.point.vec = noisy(d.relevant ? relevant_center : irrelevant_center, scale, rng);
      rec.truth = d.relevant ? Label::relevant : Label::irrelevant;
      // Irrelevant posts are corroborated one at a time (a debunk notice).
      if (!d.relevant && d.corroborated) {
        emit_event(d.ts - 43200, d.ts + 43200, *rec.point.geo, Label::irrelevant);
      }
      out.records.push_back(std::move(rec));
    }
  }
  std::stable_sort(out.events.begin(), out.events.end(),
                   [](const CorroborativeEvent& a, const CorroborativeEvent& b) { return a.ts_start < b.ts_start; });
  return out;
}

}  // namespace teamdrift
