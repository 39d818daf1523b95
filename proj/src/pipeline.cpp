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

#include "teamdrift/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "teamdrift/corroborate.hpp"
#include "teamdrift/drift.hpp"

namespace teamdrift {

using nlohmann::json;

std::string cell_id(const std::optional<GeoPoint>& geo) {
  if (!geo) return "global";
  const int lat = static_cast<int>(std::floor(geo->lat));
  const int lon = static_cast<int>(std::floor(geo->lon));
  return std::to_string(lat) + "," + std::to_string(lon);
}

std::vector<DetectedEvent> aggregate_events(std::span<const PositivePoint> positives) {
  struct Acc {
    DetectedEvent event;
    double prob_sum = 0.0;
    double lat_sum = 0.0, lon_sum = 0.0;
    std::size_t geo_count = 0;
  };
  std::map<std::pair<std::string, std::string>, Acc> groups;
  for (const auto& p : positives) {
    const std::string date = format_date(p.ts);
    const std::string cell = cell_id(p.geo);
    auto [it, fresh] = groups.try_emplace({date, cell});
    Acc& acc = it->second;
    if (fresh) {
      acc.event.cell = cell;
      acc.event.date = date;
      acc.event.first_ts = p.ts;
      acc.event.last_ts = p.ts;
    }
    acc.event.point_ids.push_back(p.id);
    acc.event.first_ts = std::min(acc.event.first_ts, p.ts);
    acc.event.last_ts = std::max(acc.event.last_ts, p.ts);
    acc.prob_sum += p.probability;
    if (p.geo) {
      acc.lat_sum += p.geo->lat;
      acc.lon_sum += p.geo->lon;
      ++acc.geo_count;
    }
  }
  std::vector<DetectedEvent> out;
  out.reserve(groups.size());
  for (auto& [key, acc] : groups) {
    const double n = static_cast<double>(acc.event.point_ids.size());
    acc.event.mean_probability = acc.prob_sum / n;
    if (acc.geo_count > 0) {
      const double g = static_cast<double>(acc.geo_count);
      acc.event.centroid_geo = GeoPoint{acc.lat_sum / g, acc.lon_sum / g};
    }
    out.push_back(std::move(acc.event));
  }
  return out;
}

std::map<std::size_t, std::size_t> posts_per_event(std::span<const DetectedEvent> events) {
  std::map<std::size_t, std::size_t> hist;
  for (const auto& e : events) ++hist[e.point_ids.size()];
  return hist;
}

std::optional<double> improvement_pct(double static_f1, double adaptive_f1) {
  if (static_f1 <= 0.0) return std::nullopt;
  return 100.0 * adaptive_f1 / static_f1;
}

std::vector<WindowReport> evaluate_windows(std::span<const PointScore> scores,
                                           const std::unordered_map<std::string, Label>& truth) {
  struct Acc {
    Confusion frozen, adaptive, online;
    std::size_t points = 0, corroborated = 0, with_truth = 0, online_scored = 0;
  };
  std::map<std::size_t, Acc> windows;
  for (const auto& s : scores) {
    Acc& acc = windows[s.window];
    ++acc.points;
    if (s.corroborated) ++acc.corroborated;
    const auto it = truth.find(s.id);
    if (it == truth.end()) continue;
    ++acc.with_truth;
    const bool actual = it->second == Label::relevant;
    // An unclassified point counts as a negative prediction.
    acc.frozen.add(s.frozen.value_or(0.0) >= 0.5 && s.frozen.has_value(), actual);
    acc.adaptive.add(s.adaptive.value_or(0.0) >= 0.5 && s.adaptive.has_value(), actual);
    if (s.online) {
      ++acc.online_scored;
      acc.online.add(*s.online >= 0.5, actual);
    }
  }
  std::vector<WindowReport> out;
  for (const auto& [w, acc] : windows) {
    WindowReport r;
    r.window = w;
    r.corroborative = acc.corroborated;
    r.unlabeled = acc.points - acc.corroborated;
    r.pct_labeled = 100.0 * label_fraction(acc.points, acc.corroborated);
    if (r.unlabeled > 0) {
      r.pct_of_unlabeled = 100.0 * static_cast<double>(acc.corroborated) / static_cast<double>(r.unlabeled);
    }
    if (acc.with_truth == acc.points) {
      r.static_f1 = acc.frozen.f1();
      r.adaptive_f1 = acc.adaptive.f1();
      if (acc.online_scored > 0) r.online_f1 = acc.online.f1();
      r.improvement_pct = improvement_pct(*r.static_f1, *r.adaptive_f1);
    }
    out.push_back(r);
  }
  return out;
}

namespace {

std::optional<double> score(const PoolSnapshot& snap, const DataPoint& x, const PipelineConfig& cfg) {
  return team_predict(build_team(snap, x, cfg.k, cfg.weighting), snap, x).probability;
}

std::string model_ids(const std::vector<std::string>& ids) {
  std::string out;
  for (const auto& id : ids) out += (out.empty() ? "" : ",") + id;
  return out.empty() ? "-" : out;
}

}  // namespace

ReplayResult replay(std::span<const StreamRecord> stream,
                    std::span<const CorroborativeEvent> events, const PipelineConfig& cfg) {
  validate(cfg);
  const PoolConfig pool_cfg = cfg.pool();
  const std::size_t dim = cfg.embedder.dim;

  ReplayResult result;
  result.pool = std::make_unique<Pool>(dim, pool_cfg);
  Pool& pool = *result.pool;
  std::shared_ptr<const PoolSnapshot> live = pool.snapshot();
  std::shared_ptr<const PoolSnapshot> frozen;

  std::unordered_map<std::string, Label> truth;
  bool complete_truth = !stream.empty();
  for (const auto& rec : stream) {
    if (rec.truth) truth.emplace(rec.point.id, *rec.truth);
    else complete_truth = false;
  }

  std::vector<PositivePoint> positives;
  DriftMonitor monitor("stream", dim, cfg.window_size, cfg.drift(), cfg.smoothing_points());
  // Classifier window of each model: the stream window it was last fit in.
  std::unordered_map<std::string, DataWindow> reference;

  for (std::size_t begin = 0, w = 0; begin < stream.size(); begin += cfg.window_size, ++w) {
    const std::size_t end = std::min(stream.size(), begin + cfg.window_size);
    const auto window = stream.subspan(begin, end - begin);
    const std::size_t first_score = result.scores.size();

    // Prediction path: a frozen snapshot for the whole window. Window 0 only
    // bootstraps the pool.
    for (const auto& rec : window) {
      DataPoint x = rec.point;
      x.label.reset();
      x.label_source.reset();
      PointScore ps;
      ps.id = x.id;
      ps.window = w;
      if (w > 0) {
        auto team = build_team(*live, x, cfg.k, cfg.weighting);
        auto pred = team_predict(team, *live, x);
        ps.online = pred.probability;
        if (pred.classified() && pred.label) {
          positives.push_back({x.id, x.ts, x.geo, *pred.probability});
        }
        result.decisions.push_back({std::move(team), pred});
      }
      result.scores.push_back(std::move(ps));
      monitor.observe(x);
      process_point(pool, x, pool_cfg);
    }

    // Maintenance path: label, evaluate, detect, learn.
    std::vector<DataPoint> window_points;
    window_points.reserve(window.size());
    for (const auto& rec : window) {
      window_points.push_back(rec.point);
      window_points.back().label.reset();
      window_points.back().label_source.reset();
    }
    const auto assignments = assign_labels(window_points, events, cfg.pad_seconds);
    std::unordered_map<std::string, Label> assigned;
    for (const auto& a : assignments) {
      assigned.emplace(a.point_id, a.label);
      pool.apply_label(a.point_id, a.label, LabelSource::corroborative);
    }
    std::vector<DataPoint> labeled;
    for (auto& p : window_points) {
      if (const auto it = assigned.find(p.id); it != assigned.end()) {
        p.label = it->second;
        p.label_source = LabelSource::corroborative;
        labeled.push_back(p);
      }
    }
    for (std::size_t i = first_score; i < result.scores.size(); ++i) {
      result.scores[i].corroborated = assigned.contains(result.scores[i].id);
    }
    for (const auto& p : labeled) fine_tune(pool, p, pool_cfg);
    if (!labeled.empty()) evaluate_models(pool, labeled, pool_cfg, static_cast<long>(w));

    std::vector<DriftVerdict> verdicts;
    for (const auto& m : pool.models()) {
      const auto it = reference.find(m.id);
      if (it == reference.end()) continue;
      if (auto v = monitor.check(it->second)) {
        v->prior_id = m.id;
        result.verdicts.push_back({window.back().point.ts, w, *v});
        verdicts.push_back(std::move(*v));
      }
    }
    const PoolDelta delta = on_drift(pool, verdicts, pool_cfg, static_cast<long>(w));
    for (const auto* ids : {&delta.retrained, &delta.generated}) {
      for (const auto& id : *ids) reference.insert_or_assign(id, monitor.live());
    }
    {
      std::ostringstream line;
      line << "window " << w << ": points=" << window.size() << " labeled=" << labeled.size()
           << " models=" << pool.models().size() << " general=" << pool.general().size()
           << " retrained=" << model_ids(delta.retrained)
           << " generated=" << model_ids(delta.generated);
      result.log.push_back(line.str());
      for (const auto& note : delta.notes) result.log.push_back("  " + note);
    }
    monitor.rollover();

    live = pool.snapshot();
    if (w == 0) {
      frozen = live;
      result.frozen = std::make_unique<Pool>(pool);
    }
    for (std::size_t i = 0; i < window.size(); ++i) {
      const DataPoint& x = window[i].point;
      PointScore& ps = result.scores[first_score + i];
      ps.adaptive = score(*live, x, cfg);
      ps.frozen = score(*frozen, x, cfg);
    }
  }

  result.events = aggregate_events(positives);
  result.reports = evaluate_windows(result.scores, complete_truth ? truth : decltype(truth){});
  return result;
}

PipelineConfig synthetic_replay_config(const SyntheticConfig& scfg) {
  PipelineConfig cfg;
  cfg.window_size = scfg.window_size;
  cfg.embedder.dim = scfg.dim;
  cfg.seed = scfg.seed;
  cfg.learn_rate = 2.0;
  cfg.epochs = 300;
  return cfg;
}

std::string reports_csv(std::span<const WindowReport> reports) {
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("NA"); };
  std::ostringstream out;
  out << "window,static_f1,adaptive_f1,unlabeled,corroborative,pct_labeled,improvement_pct\n";
  for (const auto& r : reports) {
    out << r.window << ',' << opt(r.static_f1) << ',' << opt(r.adaptive_f1) << ',' << r.unlabeled
        << ',' << r.corroborative << ',' << format_double(r.pct_labeled) << ','
        << opt(r.improvement_pct) << '\n';
  }
  return out.str();
}

namespace {

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

}  // namespace

void write_run(const std::filesystem::path& dir, const ReplayResult& result,
               const PipelineConfig& cfg) {
  std::filesystem::create_directories(dir);

  std::ostringstream kb;
  for (const auto& e : result.events) {
    json j;
    j["event_key"] = {{"cell", e.cell}, {"date", e.date}};
    j["point_ids"] = e.point_ids;
    j["posts"] = e.point_ids.size();
    j["first_ts"] = format_timestamp(e.first_ts);
    j["last_ts"] = format_timestamp(e.last_ts);
    j["mean_probability"] = e.mean_probability;
    j["centroid_geo"] = e.centroid_geo ? json{{"lat", e.centroid_geo->lat}, {"lon", e.centroid_geo->lon}}
                                       : json(nullptr);
    kb << j.dump() << '\n';
  }
  write_text(dir / cfg.knowledgebase, kb.str());
  write_text(dir / cfg.reports, reports_csv(result.reports));

  std::ostringstream hist;
  hist << "posts,events\n";
  for (const auto& [posts, count] : posts_per_event(result.events)) hist << posts << ',' << count << '\n';
  write_text(dir / "posts_per_event.csv", hist.str());

  std::ostringstream decisions;
  for (const auto& d : result.decisions) {
    json team = json::array();
    for (const auto& m : d.team.members) {
      team.push_back({{"model", m.model_id}, {"d", m.distance}, {"w", m.weight}});
    }
    json j;
    j["point_id"] = d.team.point_id;
    j["team"] = std::move(team);
    j["p"] = opt_json(d.prediction.probability);
    j["label"] = d.prediction.classified() ? json(d.prediction.label ? 1 : 0) : json(nullptr);
    decisions << j.dump() << '\n';
  }
  write_text(dir / "decisions.jsonl", decisions.str());

  std::ostringstream verdicts;
  for (const auto& v : result.verdicts) {
    json j;
    j["ts"] = format_timestamp(v.ts);
    j["prior_id"] = v.verdict.prior_id;
    j["live_id"] = v.verdict.live_id;
    j["kl"] = v.verdict.kl;
    j["threshold"] = v.verdict.threshold;
    j["drifted"] = v.verdict.drifted;
    verdicts << j.dump() << '\n';
  }
  write_text(dir / "verdicts.jsonl", verdicts.str());

  std::ostringstream scores;
  for (const auto& s : result.scores) {
    json j;
    j["id"] = s.id;
    j["window"] = s.window;
    j["online"] = opt_json(s.online);
    j["static"] = opt_json(s.frozen);
    j["adaptive"] = opt_json(s.adaptive);
    j["corroborated"] = s.corroborated;
    scores << j.dump() << '\n';
  }
  write_text(dir / "scores.jsonl", scores.str());

  if (result.pool) write_text(dir / "pool.json", save_pool(*result.pool));

  std::ostringstream log;
  for (const auto& line : result.log) log << line << '\n';
  write_text(dir / "run.log", log.str());
  write_text(dir / "config.txt", serialize_config(cfg));
}

std::vector<PointScore> read_scores(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  auto opt = [](const json& j, const char* key) -> std::optional<double> {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return j[key].get<double>();
  };
  std::vector<PointScore> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      out.push_back({.id = j.at("id").get<std::string>(),
                     .window = j.at("window").get<std::size_t>(),
                     .online = opt(j, "online"),
                     .frozen = opt(j, "static"),
                     .adaptive = opt(j, "adaptive"),
                     .corroborated = j.at("corroborated").get<bool>()});
    } catch (const json::exception& e) {
      throw InputError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace teamdrift
