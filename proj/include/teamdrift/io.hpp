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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "teamdrift/corroborate.hpp"
#include "teamdrift/embed.hpp"
#include "teamdrift/pool.hpp"

namespace teamdrift {

// One stream line. Ground truth is kept apart from the point so it can
// never leak into training.
struct StreamRecord {
  DataPoint point;
  std::optional<Label> truth;
};

// Stream JSONL: {"id","ts","lat","lon","text","label"} plus an optional
// "vec" array of precomputed embedding components. "ts" is epoch seconds or
// an ISO-8601 UTC string. Points without "vec" are embedded from their text.
// Throws InputError with the offending line number; also when the stream is
// not sorted by ts.
std::vector<StreamRecord> read_stream(std::istream& in, const Embedder& embedder);
std::vector<StreamRecord> read_stream(const std::filesystem::path& path, const Embedder& embedder);

// Writes the same format; "vec" is emitted when `with_vectors` is set.
void write_stream(std::ostream& out, const std::vector<StreamRecord>& records, bool with_vectors);

// Corroborative feed JSONL: {"id","ts_start","ts_end","lat","lon",
// "radius_km","polarity","source"}. radius_km defaults to 50 when absent.
std::vector<CorroborativeEvent> read_events(std::istream& in);
std::vector<CorroborativeEvent> read_events(const std::filesystem::path& path);
void write_events(std::ostream& out, const std::vector<CorroborativeEvent>& events);

// Pool checkpoint: every ModelRecord (weights, band, ω, memory points with
// vectors and labels) plus general memory. Doubles round-trip exactly.
std::string save_pool(const Pool& pool);
Pool load_pool(std::string_view json, const PoolConfig& cfg);

}  // namespace teamdrift
