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

#include <algorithm>
#include <cstddef>
#include <string_view>
#include <vector>

namespace teamdrift {

// One pool model seen from a data point.
struct Candidate {
  std::size_t index = 0;  // position in the owning container
  double distance = 0.0;  // cosine distance to the model's memory centroid
  long created_at = 0;
  std::string_view id;
};

// The k candidates nearest to the point. Ties go to the older model, then
// to the lexicographically smaller id.
inline std::vector<Candidate> rank_nearest(std::vector<Candidate> candidates, std::size_t k) {
  const auto closer = [](const Candidate& a, const Candidate& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    if (a.created_at != b.created_at) return a.created_at < b.created_at;
    return a.id < b.id;
  };
  const std::size_t keep = std::min(k, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                    candidates.end(), closer);
  candidates.resize(keep);
  return candidates;
}

}  // namespace teamdrift
