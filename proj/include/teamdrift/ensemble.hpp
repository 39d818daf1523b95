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

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "teamdrift/pool.hpp"

namespace teamdrift {

// How a member's raw weight combines ω with its distance d′ to the point.
enum class TeamWeighting {
  proximity,  // ω · (1 - d′), nearer models count more
  distance,   // ω · d′, the literal product
};

std::string_view to_string(TeamWeighting w);
TeamWeighting team_weighting_from_string(std::string_view name);

struct TeamMember {
  std::string model_id;
  double distance = 0.0;
  double raw_weight = 0.0;
  double weight = 0.0;  // softmax-normalized
};

struct TeamSelection {
  std::string point_id;
  std::vector<TeamMember> members;  // ascending by distance

  bool empty() const { return members.empty(); }
};

// Indices into snapshot.models of the k models whose memory centroids are
// nearest to x; ties favor older models, then smaller ids.
std::vector<std::size_t> select_models(const PoolSnapshot& snapshot, const DataPoint& x,
                                       std::size_t k);

struct MemberScore {
  double omega = 0.0;
  double distance = 0.0;
};

Vector softmax(std::span<const double> raw);
double raw_team_weight(const MemberScore& m, TeamWeighting weighting);

// Softmax-normalized weights in member order.
Vector team_weights(std::span<const MemberScore> members,
                    TeamWeighting weighting = TeamWeighting::proximity);

TeamSelection build_team(const PoolSnapshot& snapshot, const DataPoint& x, std::size_t k,
                         TeamWeighting weighting = TeamWeighting::proximity);

struct TeamPrediction {
  std::optional<double> probability;  // empty: unclassified
  bool label = false;

  bool classified() const { return probability.has_value(); }
};

// Weighted mean of the members' probabilities; label = probability >= 0.5.
TeamPrediction team_predict(const TeamSelection& team, const PoolSnapshot& snapshot,
                            const DataPoint& x);

// Combination rule on its own, for callers that already hold member outputs.
double combine(std::span<const double> weights, std::span<const double> outputs);

}  // namespace teamdrift
