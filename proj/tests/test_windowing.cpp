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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "teamdrift/windowing.hpp"

using namespace teamdrift;

namespace {

DataPoint point(std::string id, Vector v) {
  DataPoint p;
  p.id = std::move(id);
  p.vec = std::move(v);
  return p;
}

// Hazen plotting positions (i + 0.5) / N, scanned for the bracketing pair.
double hazen_oracle(std::vector<double> xs, double q) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  if (q <= 0.5 / n) return xs.front();
  if (q >= (n - 0.5) / n) return xs.back();
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double p0 = (static_cast<double>(i) + 0.5) / n;
    const double p1 = (static_cast<double>(i) + 1.5) / n;
    if (q >= p0 && q <= p1) return xs[i] + (q - p0) / (p1 - p0) * (xs[i + 1] - xs[i]);
  }
  return xs.back();
}

// Φ⁻¹(p) by bisection on the erf-based CDF.
double inverse_normal_oracle(double p) {
  double lo = -10.0, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (0.5 * (1.0 + std::erf(mid / std::sqrt(2.0))) < p) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("centroid distances") {
  DataWindow one("w", 3, 10);
  one.push(point("a", {0.3, -0.2, 0.9}));
  REQUIRE(centroid_distances(one).size() == 1);
  CHECK(centroid_distances(one)[0] == doctest::Approx(0.0).epsilon(1e-12));

  DataWindow antipodal("w", 2, 10);
  antipodal.push(point("a", {1.0, 0.0}));
  antipodal.push(point("b", {-1.0, 0.0}));
  CHECK(centroid_distances(antipodal) == std::vector<double>{0.5, 0.5});

  const std::vector<Vector> vs{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.6, 0.8, 0.0}};
  DataWindow w("w", 3, 10);
  for (std::size_t i = 0; i < vs.size(); ++i) w.push(point("p" + std::to_string(i), vs[i]));
  const double c[3] = {1.6 / 3.0, 1.8 / 3.0, 0.0};
  const double cn = std::sqrt(c[0] * c[0] + c[1] * c[1]);
  const auto d = centroid_distances(w);
  REQUIRE(d.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    const double cos = (vs[i][0] * c[0] + vs[i][1] * c[1]) / cn;
    CHECK(d[i] == doctest::Approx((1.0 - cos) / 2.0).epsilon(1e-12));
  }
}

TEST_CASE("window capacity, eviction and labels") {
  DataWindow w("w", 2, 3);
  CHECK_FALSE(w.push(point("a", {1, 0})));
  CHECK_FALSE(w.push(point("b", {0, 1})));
  CHECK_FALSE(w.push(point("c", {1, 1})));
  CHECK(w.push(point("d", {2, 0})));
  REQUIRE(w.size() == 3);
  CHECK(w.points().front().id == "b");

  CHECK(w.labeled_revision() == 0);
  CHECK(w.set_label("c", Label::relevant, LabelSource::corroborative));
  CHECK_FALSE(w.set_label("a", Label::relevant, LabelSource::corroborative));
  CHECK(w.labeled_count() == 1);
  CHECK(w.labeled_revision() == 1);
  // Evicting points does not count as new labels.
  w.push(point("e", {0, 2}));
  CHECK(w.labeled_revision() == 1);

  CHECK_THROWS_AS(w.push(point("bad", {1, 2, 3})), ContractError);
}

TEST_CASE("incremental centroid tracks the batch mean") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 3.0);
  DataWindow w("w", 8, 50);
  for (int i = 0; i < 2000; ++i) {
    Vector v(8);
    for (auto& x : v) x = g(rng);
    w.push(point("p" + std::to_string(i), v));
    if (i % 97 == 0) {
      const auto inc = w.centroid();
      const auto batch = w.batch_centroid();
      for (std::size_t j = 0; j < 8; ++j) CHECK(std::abs(inc[j] - batch[j]) <= 1e-9);
    }
  }
}

TEST_CASE("empirical Δ-band") {
  const std::vector<double> tenths{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  const auto band = empirical_delta_band(tenths, 0.6);
  CHECK(band.lo == doctest::Approx(hazen_oracle(tenths, 0.2)).epsilon(1e-12));
  CHECK(band.hi == doctest::Approx(hazen_oracle(tenths, 0.8)).epsilon(1e-12));
  CHECK(band.lo == doctest::Approx(0.25));
  CHECK(band.hi == doctest::Approx(0.85));

  const auto full = empirical_delta_band(tenths, 1.0);
  CHECK(full.lo == 0.1);
  CHECK(full.hi == 1.0);

  const auto flat = empirical_delta_band(std::vector<double>(7, 0.42), 0.6);
  CHECK(flat.degenerate());
  CHECK(flat.lo == 0.42);
  CHECK(band_membership(flat, 0.42, 0.5) == BandMembership::inside);
  CHECK(band_membership(flat, 0.43, 0.5) == BandMembership::generalization);
}

TEST_CASE("empirical band mass and monotonicity on random samples") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> size(5, 400);
  std::gamma_distribution<double> ga(2.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = size(rng);
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (auto& x : xs) {
      const double a = ga(rng), b = ga(rng);
      x = a / (a + b);
    }
    DeltaBand prev{.delta = 0.0, .lo = 1.0, .hi = 0.0};
    for (double delta : {0.1, 0.3, 0.6, 0.9}) {
      const auto band = empirical_delta_band(xs, delta);
      const auto inside = std::count_if(xs.begin(), xs.end(), [&](double x) { return band.contains_closed(x); });
      CHECK(std::abs(static_cast<double>(inside) / n - delta) <= 1.0 / n + 1e-12);
      CHECK(band.lo <= prev.lo);
      CHECK(band.hi >= prev.hi);
      prev = band;
    }
  }
}

TEST_CASE("Gaussian Δ-band") {
  const double z = inverse_normal_oracle(0.8);
  CHECK(normal_quantile(0.8) == doctest::Approx(z).epsilon(1e-12));
  const auto band = gaussian_delta_band({0.5, 0.1}, 0.6);
  CHECK(band.lo == doctest::Approx(0.5 - 0.1 * z).epsilon(1e-12));
  CHECK(band.hi == doctest::Approx(0.5 + 0.1 * z).epsilon(1e-12));
  CHECK(std::abs(band.lo - 0.41584) <= 1e-4);
  CHECK(std::abs(band.hi - 0.58416) <= 1e-4);
  CHECK(band.estimate_kind == BandEstimate::gaussian);

  const auto flat = gaussian_delta_band({0.3, 0.0}, 0.6);
  CHECK(flat.lo == 0.3);
  CHECK(flat.hi == 0.3);

  CHECK(gaussian_delta_band({0.95, 0.2}, 0.9).hi == 1.0);

  for (double p : {1e-6, 0.01, 0.3, 0.5, 0.77, 0.975, 1 - 1e-9}) {
    CHECK(normal_quantile(p) == doctest::Approx(inverse_normal_oracle(p)).epsilon(1e-9));
  }

  const auto est = estimate_gaussian(std::vector<double>{0.2, 0.4, 0.6});
  CHECK(est.mu == doctest::Approx(0.4));
  CHECK(est.sigma == doctest::Approx(std::sqrt(0.08 / 3.0)));
}

TEST_CASE("unit hypersphere volume") {
  CHECK(unit_hypersphere_volume(1) == doctest::Approx(1.0));
  CHECK(unit_hypersphere_volume(3) == doctest::Approx(std::numbers::pi / 6.0).epsilon(1e-12));
  CHECK(unit_hypersphere_volume(20) < 1e-7);
  for (int d = 1; d <= 60; ++d) {
    const double direct = std::pow(0.5, d) * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
    CHECK(unit_hypersphere_volume(d) == doctest::Approx(direct).epsilon(1e-10));
    if (d >= 6) CHECK(unit_hypersphere_volume(d + 1) < unit_hypersphere_volume(d));
  }
}

TEST_CASE("band membership") {
  const DeltaBand band{.delta = 0.6, .lo = 0.4, .hi = 0.6};
  CHECK(band_membership(band, 0.5, 0.7) == BandMembership::inside);
  CHECK(band_membership(band, 0.65, 0.7) == BandMembership::generalization);
  CHECK(band_membership(band, 0.6, 0.7) == BandMembership::generalization);
  CHECK(band_membership(band, 0.9, 0.7) == BandMembership::outside);
  CHECK(band_membership(band, 0.4, 0.7) == BandMembership::outside);
  CHECK(band_membership(band, 0.1, 0.7) == BandMembership::outside);
  CHECK_THROWS_AS(band_membership(band, 0.5, 0.55), ConfigError);
}
