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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "teamdrift/pipeline.hpp"

using namespace teamdrift;

namespace {

SyntheticConfig small_stream(std::uint64_t seed) {
  SyntheticConfig s;
  s.windows = 4;
  s.window_size = 600;
  s.dim = 32;
  s.bootstrap_fraction = 0.15;
  s.seed = seed;
  return s;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PositivePoint positive(std::string id, const char* ts, std::optional<GeoPoint> geo, double p = 0.8) {
  return {std::move(id), parse_timestamp(ts), geo, p};
}

}  // namespace

TEST_CASE("improvement ratio") {
  CHECK(*improvement_pct(0.70, 0.88) == doctest::Approx(100.0 * 0.88 / 0.70));
  // Table rows print 125.5% and 159.2% from unrounded scores.
  CHECK(std::abs(*improvement_pct(0.70, 0.88) - 125.5) <= 2.0);
  CHECK(std::abs(*improvement_pct(0.57, 0.90) - 159.2) <= 2.0);
  CHECK(*improvement_pct(0.6, 0.6) == 100.0);
  CHECK_FALSE(improvement_pct(0.0, 0.5).has_value());
}

TEST_CASE("aggregate_events groups by cell and UTC day") {
  const std::vector<PositivePoint> one{positive("a", "2020-03-01T10:00:00Z", GeoPoint{10.2, -3.4})};
  const auto single = aggregate_events(one);
  REQUIRE(single.size() == 1);
  CHECK(single[0].point_ids == std::vector<std::string>{"a"});
  CHECK(single[0].cell == "10,-4");
  CHECK(single[0].date == "2020-03-01");

  const std::vector<PositivePoint> pts{
      positive("a", "2020-03-01T10:00:00Z", GeoPoint{10.2, 20.9}, 0.6),
      positive("b", "2020-03-01T23:59:59Z", GeoPoint{10.8, 20.1}, 1.0),
      positive("c", "2020-03-02T00:00:00Z", GeoPoint{10.5, 20.5}),
      positive("d", "2020-03-01T12:00:00Z", std::nullopt),
      positive("e", "2020-03-01T12:00:00Z", GeoPoint{-0.5, 20.5}),
  };
  const auto events = aggregate_events(pts);
  REQUIRE(events.size() == 4);
  CHECK(events[0].date == "2020-03-01");
  CHECK(events[0].cell == "-1,20");
  CHECK(events[1].cell == "10,20");
  CHECK(events[1].point_ids == std::vector<std::string>{"a", "b"});
  CHECK(events[1].mean_probability == doctest::Approx(0.8));
  CHECK(events[1].centroid_geo->lat == doctest::Approx(10.5));
  CHECK(events[2].cell == "global");
  CHECK_FALSE(events[2].centroid_geo.has_value());
  CHECK(events[3].date == "2020-03-02");

  const auto hist = posts_per_event(events);
  CHECK(hist.at(1) == 3);
  CHECK(hist.at(2) == 1);
}

TEST_CASE("evaluate_windows") {
  const std::vector<PointScore> scores{
      {"a", 1, 0.9, 0.9, 0.9, true},  {"b", 1, 0.2, 0.7, 0.2, false},
      {"c", 1, 0.6, 0.1, 0.6, false}, {"d", 1, std::nullopt, std::nullopt, std::nullopt, false},
  };
  const std::unordered_map<std::string, Label> truth{{"a", Label::relevant},
                                                     {"b", Label::irrelevant},
                                                     {"c", Label::relevant},
                                                     {"d", Label::relevant}};
  const auto r = evaluate_windows(scores, truth);
  REQUIRE(r.size() == 1);
  // static: tp=1 (a), fp=1 (b), fn=2 (c, d) ; adaptive: tp=2, fp=0, fn=1
  CHECK(*r[0].static_f1 == doctest::Approx(2.0 / 5.0));
  CHECK(*r[0].adaptive_f1 == doctest::Approx(4.0 / 5.0));
  CHECK(*r[0].improvement_pct == doctest::Approx(200.0));
  CHECK(r[0].corroborative == 1);
  CHECK(r[0].unlabeled == 3);
  CHECK(r[0].pct_labeled == doctest::Approx(25.0));
  CHECK(*r[0].pct_of_unlabeled == doctest::Approx(100.0 / 3.0));

  const auto no_truth = evaluate_windows(scores, {});
  CHECK_FALSE(no_truth[0].static_f1.has_value());
  CHECK(reports_csv(no_truth).find("1,NA,NA,3,1,") != std::string::npos);
  CHECK(reports_csv(r).starts_with("window,static_f1,adaptive_f1,unlabeled,corroborative,pct_labeled,improvement_pct\n"));
}

TEST_CASE("replay basics") {
  const auto stream = generate_synthetic(small_stream(1));
  const auto cfg = synthetic_replay_config(small_stream(1));

  SUBCASE("empty stream") {
    const auto r = replay({}, {}, cfg);
    CHECK(r.events.empty());
    CHECK(r.reports.empty());
  }
  SUBCASE("window 0 bootstraps without predictions") {
    const auto r = replay(stream.records, stream.events, cfg);
    REQUIRE(r.reports.size() == 4);
    CHECK(r.scores.size() == 2400);
    CHECK_FALSE(r.scores[0].online.has_value());
    CHECK(r.scores[600].online.has_value());
    CHECK(r.decisions.size() == 1800);
    CHECK(r.frozen->models().size() == 1);
    for (const auto& rep : r.reports) {
      CHECK(rep.improvement_pct == improvement_pct(*rep.static_f1, *rep.adaptive_f1));
    }
    // Every stored event point carried a positive prediction.
    std::unordered_map<std::string, double> online;
    for (const auto& s : r.scores) {
      if (s.online) online[s.id] = *s.online;
    }
    for (const auto& e : r.events) {
      for (const auto& id : e.point_ids) CHECK(online.at(id) >= 0.5);
    }
  }
  SUBCASE("no corroborative events: no model, no retraining") {
    const auto r = replay(stream.records, {}, cfg);
    CHECK(r.pool->models().empty());
    CHECK(r.events.empty());
  }
  SUBCASE("labels only in window 0: adaptive equals static") {
    std::vector<CorroborativeEvent> early;
    const Timestamp cutoff = stream.records[600].point.ts;
    for (const auto& e : stream.events) {
      if (e.ts_end + 86400 < cutoff) early.push_back(e);
    }
    const auto r = replay(stream.records, early, cfg);
    REQUIRE(r.pool->models().size() == 1);
    CHECK(r.pool->models()[0].weights == r.frozen->models()[0].weights);
    CHECK(r.pool->models()[0].omega == r.frozen->models()[0].omega);
    for (const auto& rep : r.reports) CHECK(*rep.adaptive_f1 == *rep.static_f1);
  }
}

TEST_CASE("replay is deterministic down to the bytes") {
  const auto stream = generate_synthetic(small_stream(2));
  const auto cfg = synthetic_replay_config(small_stream(2));
  const auto base = std::filesystem::temp_directory_path() / "teamdrift_determinism";
  std::filesystem::remove_all(base);
  write_run(base / "a", replay(stream.records, stream.events, cfg), cfg);
  write_run(base / "b", replay(stream.records, stream.events, cfg), cfg);
  for (const char* f : {"knowledgebase.jsonl", "reports.csv", "scores.jsonl", "pool.json", "verdicts.jsonl"}) {
    CHECK_MESSAGE(slurp(base / "a" / f) == slurp(base / "b" / f), f);
  }
  CHECK_FALSE(slurp(base / "a" / "reports.csv").empty());
  const auto scores = read_scores(base / "a" / "scores.jsonl");
  CHECK(scores.size() == stream.records.size());
  std::filesystem::remove_all(base);
}
