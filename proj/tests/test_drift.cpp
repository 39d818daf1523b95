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
#include <random>

#include <doctest.h>

#include "teamdrift/drift.hpp"
#include "teamdrift/synthetic.hpp"

using namespace teamdrift;

namespace {

DistanceHistogram hist(std::vector<double> bins) { return {std::move(bins), 1}; }

double two_term_kl(double a0, double a1, double b0, double b1) {
  return a0 * std::log(a0 / b0) + a1 * std::log(a1 / b1);
}

DataWindow window_of(const std::vector<DataPoint>& points, std::string id) {
  DataWindow w(std::move(id), points.front().vec.size(), points.size());
  for (const auto& p : points) w.push(p);
  return w;
}

}  // namespace

TEST_CASE("histogram binning") {
  CHECK(histogram(std::vector<double>{0.0, 0.0, 0.0}, 4).bins == std::vector<double>{1, 0, 0, 0});
  CHECK(histogram(std::vector<double>{0.1, 0.9}, 2).bins == std::vector<double>{0.5, 0.5});
  const auto h = histogram(std::vector<double>{0.0, 0.25, 0.5, 1.0}, 4);
  CHECK(h.bins == std::vector<double>{0.25, 0.25, 0.25, 0.25});
  CHECK(h.count == 4);
  CHECK(histogram(std::vector<double>{1.0}, 4).bins.back() == 1.0);

  CHECK_THROWS_AS(histogram(std::vector<double>{1.2}, 4), InputError);
  CHECK_THROWS_AS(histogram(std::vector<double>{-0.1}, 4), InputError);
  CHECK_THROWS_AS(histogram(std::vector<double>{}, 4), InputError);
  CHECK_THROWS_AS(histogram(std::vector<double>{0.5}, 1), ConfigError);
}

TEST_CASE("histogram is invariant under permutation") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u;
  std::vector<double> xs(500);
  for (auto& x : xs) x = u(rng);
  const auto h = histogram(xs);
  std::shuffle(xs.begin(), xs.end(), rng);
  CHECK(histogram(xs).bins == h.bins);
}

TEST_CASE("zero-bin smoothing") {
  const auto [a, b] = smooth_zero_bins(hist({0.5, 0.5, 0, 0}), hist({0.25, 0.25, 0.25, 0.25}));
  CHECK(a.bins[0] == doctest::Approx(1.0 / 3.0));
  CHECK(a.bins[1] == doctest::Approx(1.0 / 3.0));
  CHECK(a.bins[2] == doctest::Approx(1.0 / 6.0));
  CHECK(a.bins[3] == doctest::Approx(1.0 / 6.0));
  CHECK(b.bins == std::vector<double>{0.25, 0.25, 0.25, 0.25});

  const auto [c, d] = smooth_zero_bins(hist({0.7, 0, 0.3}), hist({0.7, 0, 0.3}));
  CHECK(c.bins == d.bins);

  const auto [e, f] = smooth_zero_bins(hist({0.6, 0.4}), hist({0.1, 0.9}));
  CHECK(e.bins == std::vector<double>{0.6, 0.4});
  CHECK(f.bins == std::vector<double>{0.1, 0.9});

  CHECK_THROWS_AS(smooth_zero_bins(hist({0, 0}), hist({0, 0})), InputError);
  CHECK_THROWS_AS(smooth_zero_bins(hist({1, 0}), hist({0.5, 0.25, 0.25})), ContractError);
}

TEST_CASE("KL divergence") {
  CHECK(kl_divergence(hist({0.5, 0.5}), hist({0.9, 0.1})) == doctest::Approx(two_term_kl(0.5, 0.5, 0.9, 0.1)));
  CHECK(std::abs(kl_divergence(hist({0.5, 0.5}), hist({0.9, 0.1})) - 0.51083) <= 1e-5);
  CHECK(std::abs(kl_divergence(hist({0.9, 0.1}), hist({0.5, 0.5})) - 0.36807) <= 1e-5);
  CHECK(kl_divergence(hist({0.2, 0.3, 0.5}), hist({0.2, 0.3, 0.5})) == 0.0);
  CHECK_THROWS_AS(kl_divergence(hist({0.5, 0.5}), hist({1.0, 0.0})), ContractError);
  CHECK_THROWS_AS(kl_divergence(hist({1.0, 0.0}), hist({0.5, 0.5})), ContractError);
  // Bins empty on both sides contribute nothing.
  CHECK(kl_divergence(hist({0.5, 0.0, 0.5}), hist({0.9, 0.0, 0.1})) ==
        doctest::Approx(two_term_kl(0.5, 0.5, 0.9, 0.1)));
}

TEST_CASE("detect_drift on identical and shifted windows") {
  std::mt19937_64 rng(21);
  const Vector center = random_unit(32, rng);
  const auto prior = window_of(sample_shell(center, 0.2, 0.05, 3000, rng, "a"), "prior");
  const auto same = detect_drift(prior, prior);
  CHECK(same.kl == 0.0);
  CHECK_FALSE(same.drifted);
  CHECK(same.prior_id == "prior");

  const auto shifted = window_of(sample_shell(center, 0.5, 0.05, 3000, rng, "b"), "live");
  const auto v = detect_drift(prior, shifted);
  CHECK(v.drifted);
  CHECK(v.kl > v.threshold);
  CHECK(v.live_id == "live");
}

TEST_CASE("band_member_distances keeps the closed Δ-band") {
  const std::vector<double> xs{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  CHECK(band_member_distances(xs, 0.6) == std::vector<double>{0.3, 0.4, 0.5, 0.6, 0.7, 0.8});
}

TEST_CASE("drift monitor smoothing period") {
  DriftMonitor monitor("s", 2, 100, DriftOptions{}, 10);
  CHECK(monitor.smoothing_period() == 10);
  DataWindow prior("m", 2, 100);
  for (int i = 0; i < 20; ++i) {
    DataPoint p;
    p.id = "p" + std::to_string(i);
    p.vec = {1.0, 0.05 * i};
    prior.push(p);
  }
  for (int i = 0; i < 9; ++i) monitor.observe(prior.points()[static_cast<std::size_t>(i)]);
  CHECK(monitor.in_smoothing());
  CHECK_FALSE(monitor.check(prior).has_value());
  monitor.observe(prior.points()[9]);
  CHECK_FALSE(monitor.in_smoothing());
  const auto v = monitor.check(prior);
  REQUIRE(v.has_value());
  CHECK(v->live_id == "s-0");

  monitor.rollover();
  CHECK(monitor.live().empty());
  CHECK(monitor.live().id() == "s-1");
  CHECK_FALSE(monitor.check(prior).has_value());

  DriftMonitor defaulted("s", 2, 3000, DriftOptions{});
  CHECK(defaulted.smoothing_period() == 300);
}
