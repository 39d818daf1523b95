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

#include "teamdrift/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace teamdrift {

PoolConfig PipelineConfig::pool() const {
  return {.lambda = lambda,
          .lambda_margin = lambda_margin,
          .delta = delta,
          .k = k,
          .min_train = min_train,
          .learn_rate = learn_rate,
          .epochs = epochs,
          .memory_capacity = window_size,
          .general_capacity = general_capacity};
}

DriftOptions PipelineConfig::drift() const {
  return {.delta = delta, .threshold = kl_threshold, .bins = bins};
}

std::size_t PipelineConfig::smoothing_points() const {
  return smoothing == 0 ? std::max<std::size_t>(1, window_size / 10) : smoothing;
}

void validate(const PipelineConfig& cfg) {
  if (cfg.window_size == 0) throw ConfigError("window_size must be positive");
  if (!(cfg.kl_threshold > 0.0)) throw ConfigError("kl_threshold must be positive");
  if (cfg.bins < 2) throw ConfigError("bins must be at least 2");
  if (!(cfg.pad_seconds >= 0.0)) throw ConfigError("pad_seconds must be non-negative");
  if (cfg.embedder.dim == 0) throw ConfigError("dim must be positive");
  if (cfg.embedder.mode == EmbedMode::table && !cfg.embedder.table_path) {
    throw ConfigError("embed_mode=table requires table_path");
  }
  validate(cfg.pool());
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
    throw ConfigError("config key '" + std::string(key) + "': bad value '" + std::string(value) + "'");
  }
  return out;
}

}  // namespace

PipelineConfig parse_config(std::string_view text) {
  PipelineConfig cfg;
  std::size_t lineno = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));

    if (key == "window_size") cfg.window_size = parse_number<std::size_t>(key, value);
    else if (key == "delta") cfg.delta = parse_number<double>(key, value);
    else if (key == "kl_threshold") cfg.kl_threshold = parse_number<double>(key, value);
    else if (key == "bins") cfg.bins = parse_number<std::size_t>(key, value);
    else if (key == "smoothing") cfg.smoothing = parse_number<std::size_t>(key, value);
    else if (key == "k") cfg.k = parse_number<std::size_t>(key, value);
    else if (key == "lambda") {
      cfg.lambda = (value.empty() || value == "auto") ? std::nullopt
                                                      : std::optional(parse_number<double>(key, value));
    }
    else if (key == "lambda_margin") cfg.lambda_margin = parse_number<double>(key, value);
    else if (key == "min_train") cfg.min_train = parse_number<std::size_t>(key, value);
    else if (key == "learn_rate") cfg.learn_rate = parse_number<double>(key, value);
    else if (key == "epochs") cfg.epochs = parse_number<std::size_t>(key, value);
    else if (key == "general_capacity") cfg.general_capacity = parse_number<std::size_t>(key, value);
    else if (key == "weighting") cfg.weighting = team_weighting_from_string(value);
    else if (key == "pad_seconds") cfg.pad_seconds = parse_number<double>(key, value);
    else if (key == "dim") cfg.embedder.dim = parse_number<std::size_t>(key, value);
    else if (key == "embed_mode") cfg.embedder.mode = embed_mode_from_string(value);
    else if (key == "table_path") {
      cfg.embedder.table_path = value.empty() ? std::nullopt
                                              : std::optional<std::filesystem::path>(std::string(value));
    }
    else if (key == "hash_seed") cfg.embedder.hash_seed = parse_number<std::uint64_t>(key, value);
    else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "stream") cfg.stream = value;
    else if (key == "corroborative") cfg.corroborative = value;
    else if (key == "knowledgebase") cfg.knowledgebase = value;
    else if (key == "reports") cfg.reports = value;
    else throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
  validate(cfg);
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const PipelineConfig& cfg) {
  std::ostringstream out;
  out << "window_size=" << cfg.window_size << '\n'
      << "delta=" << format_double(cfg.delta) << '\n'
      << "kl_threshold=" << format_double(cfg.kl_threshold) << '\n'
      << "bins=" << cfg.bins << '\n'
      << "smoothing=" << cfg.smoothing << '\n'
      << "k=" << cfg.k << '\n'
      << "lambda=" << (cfg.lambda ? format_double(*cfg.lambda) : std::string("auto")) << '\n'
      << "lambda_margin=" << format_double(cfg.lambda_margin) << '\n'
      << "min_train=" << cfg.min_train << '\n'
      << "learn_rate=" << format_double(cfg.learn_rate) << '\n'
      << "epochs=" << cfg.epochs << '\n'
      << "general_capacity=" << cfg.general_capacity << '\n'
      << "weighting=" << to_string(cfg.weighting) << '\n'
      << "pad_seconds=" << format_double(cfg.pad_seconds) << '\n'
      << "dim=" << cfg.embedder.dim << '\n'
      << "embed_mode=" << to_string(cfg.embedder.mode) << '\n'
      << "table_path=" << (cfg.embedder.table_path ? cfg.embedder.table_path->string() : "") << '\n'
      << "hash_seed=" << cfg.embedder.hash_seed << '\n'
      << "seed=" << cfg.seed << '\n'
      << "stream=" << cfg.stream << '\n'
      << "corroborative=" << cfg.corroborative << '\n'
      << "knowledgebase=" << cfg.knowledgebase << '\n'
      << "reports=" << cfg.reports << '\n';
  return out.str();
}

}  // namespace teamdrift
