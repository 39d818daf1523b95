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

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace teamdrift {

using Vector = std::vector<double>;
using Timestamp = std::int64_t;  // UTC seconds since the epoch

// Malformed or out-of-range input data (exit code 1 in the CLI).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration (exit code 2 in the CLI).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke a documented precondition.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct GeoPoint {
  double lat = 0.0;  // degrees, [-90, 90]
  double lon = 0.0;  // degrees, [-180, 180]

  bool operator==(const GeoPoint&) const = default;
};

enum class Label : int { irrelevant = 0, relevant = 1 };
enum class LabelSource { ground_truth, corroborative, predicted };

std::string_view to_string(LabelSource source);
LabelSource label_source_from_string(std::string_view name);

struct DataPoint {
  std::string id;
  Timestamp ts = 0;
  std::optional<GeoPoint> geo;
  std::string text;
  Vector vec;
  std::optional<Label> label;
  std::optional<LabelSource> label_source;

  bool is_corroborated() const {
    return label.has_value() && label_source == LabelSource::corroborative;
  }
};

// Throws InputError when the point breaks a DataPoint invariant for
// embedding dimension `dim`.
void validate(const DataPoint& point, std::size_t dim);

// Cosine distance mapped onto [0, 1]: (1 - cos) / 2.
//
// A zero vector on either side has no direction; the distance is then fixed
// at 0.5 and `degenerate` is set so callers can surface it in diagnostics.
struct DistanceResult {
  double value = 0.5;
  bool degenerate = false;
};

DistanceResult cosine_distance_checked(std::span<const double> a, std::span<const double> b);

inline double cosine_distance(std::span<const double> a, std::span<const double> b) {
  return cosine_distance_checked(a, b).value;
}

double dot(std::span<const double> a, std::span<const double> b);
double l2_norm(std::span<const double> a);
void normalize_in_place(Vector& v);

// ISO-8601 UTC, "YYYY-MM-DDTHH:MM:SSZ".
std::string format_timestamp(Timestamp ts);
std::string format_date(Timestamp ts);  // "YYYY-MM-DD"
Timestamp parse_timestamp(std::string_view text);

}  // namespace teamdrift

namespace teamdrift {

// Binary confusion counts for the relevant class.
struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  void add(bool predicted, bool actual) {
    if (predicted && actual) ++tp;
    else if (predicted) ++fp;
    else if (actual) ++fn;
    else ++tn;
  }

  // Harmonic mean of precision and recall. With no positives predicted or
  // present there is nothing to get wrong, so the score is 1.
  double f1() const {
    const std::size_t denom = 2 * tp + fp + fn;
    return denom == 0 ? 1.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
  }
};

}  // namespace teamdrift
