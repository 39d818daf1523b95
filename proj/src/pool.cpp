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

#include "teamdrift/pool.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "teamdrift/selection.hpp"

namespace teamdrift {

void validate(const PoolConfig& cfg) {
  if (cfg.lambda && !(*cfg.lambda > 0.0 && *cfg.lambda <= 1.0)) {
    throw ConfigError("lambda must lie in (0, 1]");
  }
  if (!(cfg.lambda_margin >= 0.0)) throw ConfigError("lambda_margin must be non-negative");
  if (!(cfg.delta > 0.0 && cfg.delta <= 1.0)) throw ConfigError("delta must lie in (0, 1]");
  if (cfg.k == 0) throw ConfigError("k must be positive");
  if (cfg.min_train < 2) throw ConfigError("min_train must be at least 2");
  if (!(cfg.learn_rate > 0.0)) throw ConfigError("learn_rate must be positive");
  if (cfg.memory_capacity == 0 || cfg.general_capacity == 0) {
    throw ConfigError("memory capacities must be positive");
  }
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

namespace {

double logit(std::span<const double> weights, std::span<const double> x) {
  if (weights.size() != x.size() + 1) throw ContractError("logistic model: dimension mismatch");
  double z = weights.back();
  for (std::size_t i = 0; i < x.size(); ++i) z += weights[i] * x[i];
  return z;
}

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

std::vector<Example> labeled_examples(const auto& points) {
  std::vector<Example> out;
  for (const DataPoint& p : points) {
    if (p.label) out.push_back({p.vec, *p.label == Label::relevant ? 1.0 : 0.0});
  }
  return out;
}

bool both_classes(std::span<const Example> examples) {
  bool pos = false, neg = false;
  for (const auto& e : examples) (e.y > 0.5 ? pos : neg) = true;
  return pos && neg;
}

double training_f1(std::span<const double> weights, std::span<const Example> examples) {
  Confusion c;
  for (const auto& e : examples) c.add(predict_raw(weights, e.x) >= 0.5, e.y > 0.5);
  return c.f1();
}

}  // namespace

double predict_raw(std::span<const double> weights, std::span<const double> x) {
  return sigmoid(logit(weights, x));
}

double logistic_loss(std::span<const double> weights, std::span<const Example> examples) {
  if (examples.empty()) return 0.0;
  double loss = 0.0;
  for (const auto& e : examples) {
    const double z = logit(weights, e.x);
    // -y log σ(z) - (1 - y) log(1 - σ(z)) = softplus(z) - y z
    loss += softplus(z) - e.y * z;
  }
  return loss / static_cast<double>(examples.size());
}

Vector logistic_gradient(std::span<const double> weights, std::span<const Example> examples) {
  Vector g(weights.size(), 0.0);
  if (examples.empty()) return g;
  const std::size_t dim = weights.size() - 1;
  for (const auto& e : examples) {
    const double r = sigmoid(logit(weights, e.x)) - e.y;
    for (std::size_t i = 0; i < dim; ++i) g[i] += r * e.x[i];
    g[dim] += r;
  }
  for (double& v : g) v /= static_cast<double>(examples.size());
  return g;
}

void fit_logistic(Vector& weights, std::span<const Example> examples, double learn_rate,
                  std::size_t epochs) {
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    const Vector g = logistic_gradient(weights, examples);
    for (std::size_t i = 0; i < weights.size(); ++i) weights[i] -= learn_rate * g[i];
  }
}

double predict_raw(const ModelRecord& model, const DataPoint& x) {
  return predict_raw(model.weights, x.vec);
}

double effective_lambda(const DeltaBand& band, const PoolConfig& cfg) {
  if (cfg.lambda) return std::max(*cfg.lambda, band.hi);
  return std::min(1.0, band.hi + cfg.lambda_margin);
}

DeltaBand memory_band(const DataWindow& memory, double delta) {
  return empirical_delta_band(centroid_distances(memory), delta);
}

ModelRecord train_classifier(std::string id, std::span<const DataPoint> data,
                             const PoolConfig& cfg, std::size_t dim, long created_at) {
  const auto examples = labeled_examples(data);
  if (examples.size() < cfg.min_train) {
    throw TrainingDeferred("need " + std::to_string(cfg.min_train) + " labeled points, have " +
                           std::to_string(examples.size()));
  }
  if (!both_classes(examples)) {
    throw TrainingDeferred("labeled data holds a single class; defer generation");
  }
  ModelRecord m{.id = id,
                .weights = Vector(dim + 1, 0.0),
                .memory = DataWindow(id, dim, std::max(cfg.memory_capacity, data.size()),
                                     WindowRole::classifier_window),
                .band = {},
                .omega = 0.0,
                .created_at = created_at,
                .last_evaluated = created_at,
                .trained_revision = 0};
  for (const auto& p : data) m.memory.push(p);
  fit_logistic(m.weights, examples, cfg.learn_rate, cfg.epochs);
  m.band = memory_band(m.memory, cfg.delta);
  m.omega = training_f1(m.weights, examples);
  m.trained_revision = m.memory.labeled_revision();
  return m;
}

void retrain(ModelRecord& model, const PoolConfig& cfg) {
  const auto examples = labeled_examples(model.memory.points());
  if (!both_classes(examples)) {
    throw TrainingDeferred("model " + model.id + ": labeled memory holds a single class");
  }
  fit_logistic(model.weights, examples, cfg.learn_rate, cfg.epochs);
  model.band = memory_band(model.memory, cfg.delta);
  model.omega = training_f1(model.weights, examples);
  model.trained_revision = model.memory.labeled_revision();
}

GeneralMemory::GeneralMemory(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw ConfigError("general memory capacity must be positive");
}

void GeneralMemory::push(DataPoint point) {
  points_.push_back(std::move(point));
  while (points_.size() > capacity_) points_.pop_front();
}

bool GeneralMemory::set_label(const std::string& point_id, Label label, LabelSource source) {
  bool found = false;
  for (auto& p : points_) {
    if (p.id == point_id) {
      p.label = label;
      p.label_source = source;
      found = true;
    }
  }
  return found;
}

std::size_t GeneralMemory::labeled_count() const {
  return static_cast<std::size_t>(
      std::count_if(points_.begin(), points_.end(), [](const DataPoint& p) { return p.label.has_value(); }));
}

bool GeneralMemory::has_both_classes() const {
  bool pos = false, neg = false;
  for (const auto& p : points_) {
    if (p.label) (*p.label == Label::relevant ? pos : neg) = true;
  }
  return pos && neg;
}

Pool::Pool(std::size_t dim, const PoolConfig& cfg) : dim_(dim), general_(cfg.general_capacity) {}

ModelRecord* Pool::find(std::string_view id) {
  for (auto& m : models_) {
    if (m.id == id) return &m;
  }
  return nullptr;
}

std::string Pool::next_model_id() {
  char buf[24];
  std::snprintf(buf, sizeof buf, "m%04zu", next_id_++);
  return buf;
}

void Pool::apply_label(const std::string& point_id, Label label, LabelSource source) {
  for (auto& m : models_) m.memory.set_label(point_id, label, source);
  general_.set_label(point_id, label, source);
}

std::shared_ptr<const PoolSnapshot> Pool::snapshot() const {
  auto snap = std::make_shared<PoolSnapshot>();
  snap->models.reserve(models_.size());
  for (const auto& m : models_) {
    snap->models.push_back({m.id, m.weights, m.memory.centroid(), m.band, m.omega, m.created_at});
  }
  return snap;
}

RoutingOutcome process_point(Pool& pool, const DataPoint& x, const PoolConfig& cfg) {
  RoutingOutcome out;
  auto& models = pool.models();

  std::vector<Candidate> candidates;
  candidates.reserve(models.size());
  for (std::size_t i = 0; i < models.size(); ++i) {
    candidates.push_back({i, cosine_distance(x.vec, models[i].memory.centroid()),
                          models[i].created_at, models[i].id});
  }
  const auto selected = rank_nearest(std::move(candidates), cfg.k);

  bool has_region = false;
  for (const auto& c : selected) {
    ModelRecord& m = models[c.index];
    switch (band_membership(m.band, c.distance, effective_lambda(m.band, cfg))) {
      case BandMembership::inside:
        m.memory.push(x);
        out.models_appended.push_back(m.id);
        if (x.is_corroborated()) {
          const Example e{x.vec, *x.label == Label::relevant ? 1.0 : 0.0};
          fit_logistic(m.weights, std::span(&e, 1), cfg.learn_rate / 10.0, 1);
          out.updated.push_back(m.id);
        }
        has_region = true;
        break;
      case BandMembership::generalization:
        m.memory.push(x);
        out.models_appended.push_back(m.id);
        break;
      case BandMembership::outside:
        break;
    }
  }
  if (!has_region) {
    pool.general().push(x);
    out.general_memory_hit = true;
  }
  return out;
}

std::vector<std::string> fine_tune(Pool& pool, const DataPoint& x, const PoolConfig& cfg) {
  if (!x.is_corroborated()) throw ContractError("fine_tune: point " + x.id + " has no corroborative label");
  auto& models = pool.models();
  std::vector<Candidate> candidates;
  candidates.reserve(models.size());
  for (std::size_t i = 0; i < models.size(); ++i) {
    candidates.push_back({i, cosine_distance(x.vec, models[i].memory.centroid()),
                          models[i].created_at, models[i].id});
  }
  std::vector<std::string> updated;
  const Example e{x.vec, *x.label == Label::relevant ? 1.0 : 0.0};
  for (const auto& c : rank_nearest(std::move(candidates), cfg.k)) {
    ModelRecord& m = models[c.index];
    if (band_membership(m.band, c.distance, effective_lambda(m.band, cfg)) != BandMembership::inside) {
      continue;
    }
    fit_logistic(m.weights, std::span(&e, 1), cfg.learn_rate / 10.0, 1);
    updated.push_back(m.id);
  }
  return updated;
}

PoolDelta on_drift(Pool& pool, std::span<const DriftVerdict> verdicts, const PoolConfig& cfg,
                   long window_index) {
  PoolDelta delta;
  for (const auto& v : verdicts) {
    if (!v.drifted) continue;
    ModelRecord* m = pool.find(v.prior_id);
    if (m == nullptr) {
      delta.notes.push_back("verdict for unknown model " + v.prior_id);
      continue;
    }
    if (m->memory.labeled_revision() == m->trained_revision) {
      delta.notes.push_back(m->id + ": drifted but no new labels since last fit");
      continue;
    }
    try {
      retrain(*m, cfg);
      delta.retrained.push_back(m->id);
    } catch (const TrainingDeferred& e) {
      delta.notes.push_back(e.what());
    }
  }

  auto& general = pool.general();
  if (general.labeled_count() >= cfg.min_train && general.has_both_classes()) {
    const std::vector<DataPoint> data(general.points().begin(), general.points().end());
    try {
      auto model = train_classifier(pool.next_model_id(), data, cfg, pool.dim(), window_index);
      delta.generated.push_back(model.id);
      pool.models().push_back(std::move(model));
      general.clear();
    } catch (const TrainingDeferred& e) {
      delta.notes.push_back(std::string("generation deferred: ") + e.what());
    }
  } else if (general.size() > 0) {
    delta.notes.push_back("generation deferred: general memory holds " +
                          std::to_string(general.labeled_count()) + " labeled points");
  }
  return delta;
}

void evaluate_models(Pool& pool, std::span<const DataPoint> labeled, const PoolConfig& cfg,
                     long window_index) {
  for (auto& m : pool.models()) {
    const Vector centroid = m.memory.centroid();
    const double lambda = effective_lambda(m.band, cfg);
    Confusion c;
    std::size_t evidence = 0;
    for (const auto& p : labeled) {
      if (!p.label) continue;
      if (band_membership(m.band, cosine_distance(p.vec, centroid), lambda) != BandMembership::inside) {
        continue;
      }
      c.add(predict_raw(m.weights, p.vec) >= 0.5, *p.label == Label::relevant);
      ++evidence;
    }
    if (evidence == 0) continue;
    m.omega = c.f1();
    m.last_evaluated = window_index;
  }
}

}  // namespace teamdrift
