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

#include "teamdrift/ensemble.hpp"

#include <algorithm>
#include <cmath>

#include "teamdrift/selection.hpp"

namespace teamdrift {

std::string_view to_string(TeamWeighting w) {
  return w == TeamWeighting::distance ? "distance" : "proximity";
}

TeamWeighting team_weighting_from_string(std::string_view name) {
  if (name == "proximity") return TeamWeighting::proximity;
  if (name == "distance") return TeamWeighting::distance;
  throw ConfigError("unknown team weighting '" + std::string(name) + "'");
}

namespace {

std::vector<Candidate> nearest(const PoolSnapshot& snapshot, const DataPoint& x, std::size_t k) {
  std::vector<Candidate> candidates;
  candidates.reserve(snapshot.models.size());
  for (std::size_t i = 0; i < snapshot.models.size(); ++i) {
    const auto& m = snapshot.models[i];
    candidates.push_back({i, cosine_distance(x.vec, m.centroid), m.created_at, m.id});
  }
  return rank_nearest(std::move(candidates), k);
}

}  // namespace

std::vector<std::size_t> select_models(const PoolSnapshot& snapshot, const DataPoint& x,
                                       std::size_t k) {
  std::vector<std::size_t> out;
  for (const auto& c : nearest(snapshot, x, k)) out.push_back(c.index);
  return out;
}

Vector softmax(std::span<const double> raw) {
  Vector out(raw.begin(), raw.end());
  if (out.empty()) return out;
  const double top = *std::max_element(out.begin(), out.end());
  double total = 0.0;
  for (double& v : out) {
    v = std::exp(v - top);
    total += v;
  }
  for (double& v : out) v /= total;
  return out;
}

double raw_team_weight(const MemberScore& m, TeamWeighting weighting) {
  return weighting == TeamWeighting::proximity ? m.omega * (1.0 - m.distance)
                                               : m.omega * m.distance;
}

Vector team_weights(std::span<const MemberScore> members, TeamWeighting weighting) {
  Vector raw;
  raw.reserve(members.size());
  for (const auto& m : members) raw.push_back(raw_team_weight(m, weighting));
  return softmax(raw);
}

TeamSelection build_team(const PoolSnapshot& snapshot, const DataPoint& x, std::size_t k,
                         TeamWeighting weighting) {
  TeamSelection team{.point_id = x.id, .members = {}};
  const auto chosen = nearest(snapshot, x, k);
  std::vector<MemberScore> scores;
  for (const auto& c : chosen) {
    const auto& m = snapshot.models[c.index];
    scores.push_back({m.omega, c.distance});
    team.members.push_back({m.id, c.distance, raw_team_weight(scores.back(), weighting), 0.0});
  }
  const Vector w = team_weights(scores, weighting);
  for (std::size_t i = 0; i < w.size(); ++i) team.members[i].weight = w[i];
  return team;
}

double combine(std::span<const double> weights, std::span<const double> outputs) {
  // Divide by the weight sum so equal outputs combine exactly.
  double p = 0.0, total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    p += weights[i] * outputs[i];
    total += weights[i];
  }
  return total > 0.0 ? std::clamp(p / total, 0.0, 1.0) : 0.0;
}

TeamPrediction team_predict(const TeamSelection& team, const PoolSnapshot& snapshot,
                            const DataPoint& x) {
  if (team.empty()) return {};
  Vector weights, outputs;
  for (const auto& member : team.members) {
    const auto it = std::find_if(snapshot.models.begin(), snapshot.models.end(),
                                 [&](const ModelView& m) { return m.id == member.model_id; });
    if (it == snapshot.models.end()) {
      throw ContractError("team member " + member.model_id + " is not in the snapshot");
    }
    weights.push_back(member.weight);
    outputs.push_back(predict_raw(it->weights, x.vec));
  }
  const double p = combine(weights, outputs);
  return {p, p >= 0.5};
}

}  // namespace teamdrift
