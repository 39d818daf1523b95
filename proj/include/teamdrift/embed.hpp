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
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "teamdrift/core.hpp"

namespace teamdrift {

enum class EmbedMode { feature_hash, table };

struct EmbedderConfig {
  std::size_t dim = 300;
  EmbedMode mode = EmbedMode::feature_hash;
  std::optional<std::filesystem::path> table_path;
  std::uint64_t hash_seed = 0;

  bool operator==(const EmbedderConfig&) const = default;
};

std::string_view to_string(EmbedMode mode);
EmbedMode embed_mode_from_string(std::string_view name);

// Lowercases ASCII letters and splits on every non-alphanumeric byte.
// Bytes >= 0x80 are kept inside tokens so UTF-8 words stay intact.
std::vector<std::string> tokenize(std::string_view text);

// Deterministic text embedding.
//
// feature_hash: every token is hashed to a bucket in [0, dim) and a sign in
// {-1, +1}; the signed counts are summed and L2-normalized.
// table: per-token vectors are averaged (unknown tokens skipped) and
// L2-normalized. Empty or all-unknown text maps to the zero vector.
class Embedder {
 public:
  // Throws ConfigError on an invalid config or an unreadable table.
  explicit Embedder(EmbedderConfig cfg);

  Vector embed(std::string_view text) const;

  const EmbedderConfig& config() const { return cfg_; }
  std::size_t table_size() const { return table_.size(); }

 private:
  EmbedderConfig cfg_;
  std::unordered_map<std::string, Vector> table_;
};

inline Vector embed(std::string_view text, const EmbedderConfig& cfg) {
  return Embedder(cfg).embed(text);
}

// Token hash used by the feature_hash mode: FNV-1a over the token bytes,
// seeded, followed by a splitmix64 finalizer.
std::uint64_t token_hash(std::string_view token, std::uint64_t seed);

}  // namespace teamdrift
