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

#include "teamdrift/embed.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace teamdrift {

std::string_view to_string(EmbedMode mode) {
  return mode == EmbedMode::table ? "table" : "feature_hash";
}

EmbedMode embed_mode_from_string(std::string_view name) {
  if (name == "feature_hash") return EmbedMode::feature_hash;
  if (name == "table") return EmbedMode::table;
  throw ConfigError("unknown embed mode '" + std::string(name) + "'");
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (c >= 0x80 || std::isalnum(c)) {
      current.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::uint64_t token_hash(std::string_view token, std::uint64_t seed) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
  for (unsigned char c : token) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  // splitmix64 finalizer
  h += 0x9e3779b97f4a7c15ULL;
  h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
  h = (h ^ (h >> 27)) * 0x94d049bb133111ebULL;
  return h ^ (h >> 31);
}

namespace {

std::unordered_map<std::string, Vector> load_table(const std::filesystem::path& path,
                                                   std::size_t dim) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open embedding table " + path.string());
  std::unordered_map<std::string, Vector> table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream fields(line);
    std::string token;
    if (!(fields >> token)) continue;
    Vector v;
    v.reserve(dim);
    double x = 0.0;
    while (fields >> x) v.push_back(x);
    if (!fields.eof() || v.size() != dim) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                        std::to_string(dim) + " floats after the token");
    }
    table.insert_or_assign(std::move(token), std::move(v));
  }
  return table;
}

}  // namespace

Embedder::Embedder(EmbedderConfig cfg) : cfg_(std::move(cfg)) {
  if (cfg_.dim == 0) throw ConfigError("embedding dim must be positive");
  if (cfg_.mode == EmbedMode::table) {
    if (!cfg_.table_path) throw ConfigError("table embedding mode requires table_path");
    table_ = load_table(*cfg_.table_path, cfg_.dim);
  }
}

Vector Embedder::embed(std::string_view text) const {
  Vector v(cfg_.dim, 0.0);
  const auto tokens = tokenize(text);
  if (cfg_.mode == EmbedMode::feature_hash) {
    for (const auto& token : tokens) {
      const std::uint64_t h = token_hash(token, cfg_.hash_seed);
      const std::size_t bucket = static_cast<std::size_t>((h >> 1) % cfg_.dim);
      v[bucket] += (h & 1U) ? 1.0 : -1.0;
    }
  } else {
    std::size_t known = 0;
    for (const auto& token : tokens) {
      const auto it = table_.find(token);
      if (it == table_.end()) continue;
      for (std::size_t i = 0; i < cfg_.dim; ++i) v[i] += it->second[i];
      ++known;
    }
    if (known > 0) {
      for (double& x : v) x /= static_cast<double>(known);
    }
  }
  normalize_in_place(v);
  return v;
}

}  // namespace teamdrift
