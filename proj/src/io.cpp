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

#include "teamdrift/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

namespace teamdrift {

using nlohmann::json;

namespace {

[[noreturn]] void line_error(std::size_t lineno, const std::string& what) {
  throw InputError("line " + std::to_string(lineno) + ": " + what);
}

Timestamp json_timestamp(const json& v) {
  if (v.is_number_integer()) return v.get<Timestamp>();
  if (v.is_string()) return parse_timestamp(v.get<std::string>());
  throw InputError("timestamp must be epoch seconds or an ISO-8601 string");
}

Label json_label(const json& v) {
  if (v.is_boolean()) return v.get<bool>() ? Label::relevant : Label::irrelevant;
  if (v.is_number_integer()) {
    const auto n = v.get<long long>();
    if (n == 0 || n == 1) return n == 1 ? Label::relevant : Label::irrelevant;
  }
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "relevant") return Label::relevant;
    if (s == "irrelevant") return Label::irrelevant;
  }
  throw InputError("label must be 0/1 or relevant/irrelevant");
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

json point_json(const DataPoint& p) {
  json j;
  j["id"] = p.id;
  j["ts"] = p.ts;
  if (p.geo) {
    j["lat"] = p.geo->lat;
    j["lon"] = p.geo->lon;
  }
  j["text"] = p.text;
  j["vec"] = p.vec;
  if (p.label) {
    j["label"] = static_cast<int>(*p.label);
    j["label_source"] = std::string(to_string(*p.label_source));
  }
  return j;
}

DataPoint point_from_json(const json& j) {
  DataPoint p;
  p.id = j.at("id").get<std::string>();
  p.ts = j.at("ts").get<Timestamp>();
  if (j.contains("lat")) p.geo = GeoPoint{j.at("lat").get<double>(), j.at("lon").get<double>()};
  p.text = j.value("text", "");
  p.vec = j.at("vec").get<Vector>();
  if (j.contains("label")) {
    p.label = json_label(j.at("label"));
    p.label_source = label_source_from_string(j.at("label_source").get<std::string>());
  }
  return p;
}

json band_json(const DeltaBand& b) {
  return {{"delta", b.delta},
          {"lo", b.lo},
          {"hi", b.hi},
          {"kind", b.estimate_kind == BandEstimate::gaussian ? "gaussian" : "empirical"}};
}

DeltaBand band_from_json(const json& j) {
  return {j.at("delta").get<double>(), j.at("lo").get<double>(), j.at("hi").get<double>(),
          j.at("kind").get<std::string>() == "gaussian" ? BandEstimate::gaussian
                                                        : BandEstimate::empirical};
}

}  // namespace

std::vector<StreamRecord> read_stream(std::istream& in, const Embedder& embedder) {
  std::vector<StreamRecord> out;
  std::string line;
  std::size_t lineno = 0;
  const std::size_t dim = embedder.config().dim;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    StreamRecord rec;
    try {
      const json j = json::parse(line);
      auto& p = rec.point;
      p.id = j.at("id").get<std::string>();
      p.ts = json_timestamp(j.at("ts"));
      const bool has_lat = j.contains("lat") && !j["lat"].is_null();
      const bool has_lon = j.contains("lon") && !j["lon"].is_null();
      if (has_lat != has_lon) throw InputError("lat and lon must appear together");
      if (has_lat) p.geo = GeoPoint{j["lat"].get<double>(), j["lon"].get<double>()};
      p.text = j.value("text", "");
      if (j.contains("vec") && !j["vec"].is_null()) {
        p.vec = j["vec"].get<Vector>();
      } else {
        p.vec = embedder.embed(p.text);
      }
      if (j.contains("label") && !j["label"].is_null()) rec.truth = json_label(j["label"]);
      validate(p, dim);
    } catch (const InputError& e) {
      line_error(lineno, e.what());
    } catch (const json::exception& e) {
      line_error(lineno, e.what());
    }
    if (!out.empty() && rec.point.ts < out.back().point.ts) {
      line_error(lineno, "stream is not sorted by ts");
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<StreamRecord> read_stream(const std::filesystem::path& path, const Embedder& embedder) {
  auto in = open_input(path);
  return read_stream(in, embedder);
}

void write_stream(std::ostream& out, const std::vector<StreamRecord>& records, bool with_vectors) {
  for (const auto& rec : records) {
    const auto& p = rec.point;
    json j;
    j["id"] = p.id;
    j["ts"] = p.ts;
    if (p.geo) {
      j["lat"] = p.geo->lat;
      j["lon"] = p.geo->lon;
    }
    j["text"] = p.text;
    if (rec.truth) j["label"] = static_cast<int>(*rec.truth);
    if (with_vectors) j["vec"] = p.vec;
    out << j.dump() << '\n';
  }
}

std::vector<CorroborativeEvent> read_events(std::istream& in) {
  std::vector<CorroborativeEvent> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      CorroborativeEvent e;
      e.id = j.at("id").get<std::string>();
      e.ts_start = json_timestamp(j.at("ts_start"));
      e.ts_end = json_timestamp(j.at("ts_end"));
      e.lat = j.at("lat").get<double>();
      e.lon = j.at("lon").get<double>();
      if (j.contains("radius_km") && !j["radius_km"].is_null()) e.radius_km = j["radius_km"].get<double>();
      e.polarity = json_label(j.at("polarity"));
      e.source = j.value("source", "");
      validate(e);
      out.push_back(std::move(e));
    } catch (const InputError& e) {
      line_error(lineno, e.what());
    } catch (const json::exception& e) {
      line_error(lineno, e.what());
    }
  }
  return out;
}

std::vector<CorroborativeEvent> read_events(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_events(in);
}

void write_events(std::ostream& out, const std::vector<CorroborativeEvent>& events) {
  for (const auto& e : events) {
    json j;
    j["id"] = e.id;
    j["ts_start"] = format_timestamp(e.ts_start);
    j["ts_end"] = format_timestamp(e.ts_end);
    j["lat"] = e.lat;
    j["lon"] = e.lon;
    j["radius_km"] = e.radius_km;
    j["polarity"] = e.polarity == Label::relevant ? "relevant" : "irrelevant";
    j["source"] = e.source;
    out << j.dump() << '\n';
  }
}

std::string save_pool(const Pool& pool) {
  json models = json::array();
  for (const auto& m : pool.models()) {
    json memory = json::array();
    for (const auto& p : m.memory.points()) memory.push_back(point_json(p));
    models.push_back({{"id", m.id},
                      {"weights", m.weights},
                      {"band", band_json(m.band)},
                      {"omega", m.omega},
                      {"created_at", m.created_at},
                      {"last_evaluated", m.last_evaluated},
                      {"trained_revision", m.trained_revision},
                      {"memory_revision", m.memory.labeled_revision()},
                      {"memory_sum", m.memory.state().sum},
                      {"memory_evictions", m.memory.state().evictions_since_rebuild},
                      {"memory_capacity", m.memory.capacity()},
                      {"memory", std::move(memory)}});
  }
  json general = json::array();
  for (const auto& p : pool.general().points()) general.push_back(point_json(p));
  const json doc = {{"dim", pool.dim()},
                    {"next_id", pool.id_counter()},
                    {"models", std::move(models)},
                    {"general_memory", std::move(general)}};
  return doc.dump(1);
}

Pool load_pool(std::string_view text, const PoolConfig& cfg) {
  try {
    const json doc = json::parse(text);
    Pool pool(doc.at("dim").get<std::size_t>(), cfg);
    pool.set_id_counter(doc.at("next_id").get<std::size_t>());
    for (const auto& jm : doc.at("models")) {
      const auto id = jm.at("id").get<std::string>();
      ModelRecord m{.id = id,
                    .weights = jm.at("weights").get<Vector>(),
                    .memory = DataWindow(id, pool.dim(), jm.at("memory_capacity").get<std::size_t>(),
                                         WindowRole::classifier_window),
                    .band = band_from_json(jm.at("band")),
                    .omega = jm.at("omega").get<double>(),
                    .created_at = jm.at("created_at").get<long>(),
                    .last_evaluated = jm.at("last_evaluated").get<long>(),
                    .trained_revision = jm.at("trained_revision").get<std::size_t>()};
      for (const auto& jp : jm.at("memory")) m.memory.push(point_from_json(jp));
      m.memory.restore({jm.at("memory_sum").get<Vector>(),
                        jm.at("memory_evictions").get<std::size_t>(),
                        jm.at("memory_revision").get<std::size_t>()});
      pool.models().push_back(std::move(m));
    }
    for (const auto& jp : doc.at("general_memory")) pool.general().push(point_from_json(jp));
    return pool;
  } catch (const json::exception& e) {
    throw InputError(std::string("bad pool checkpoint: ") + e.what());
  }
}

}  // namespace teamdrift
