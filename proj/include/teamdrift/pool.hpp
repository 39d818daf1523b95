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
#include <deque>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "teamdrift/drift.hpp"
#include "teamdrift/windowing.hpp"

namespace teamdrift {

struct PoolConfig {
  // Absolute generalization bound. When unset each model uses
  // min(1, band.hi + lambda_margin).
  std::optional<double> lambda;
  double lambda_margin = 0.05;
  double delta = kDefaultDelta;
  std::size_t k = 5;
  std::size_t min_train = 50;
  double learn_rate = 0.1;
  std::size_t epochs = 20;
  std::size_t memory_capacity = kDefaultWindowSize;
  std::size_t general_capacity = kDefaultWindowSize;
};

void validate(const PoolConfig& cfg);

// Raised when the data cannot support a fit (too few labels or a single
// class). Callers defer generation until more corroborative labels arrive.
class TrainingDeferred : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- logistic regression -------------------------------------------------

// Weights carry the bias as their last component.
struct Example {
  std::span<const double> x;
  double y = 0.0;
};

double sigmoid(double z);
double predict_raw(std::span<const double> weights, std::span<const double> x);

// Mean negative log-likelihood over the examples.
double logistic_loss(std::span<const double> weights, std::span<const Example> examples);
Vector logistic_gradient(std::span<const double> weights, std::span<const Example> examples);

// Full-batch gradient descent, `epochs` steps of size `learn_rate`.
void fit_logistic(Vector& weights, std::span<const Example> examples, double learn_rate,
                  std::size_t epochs);

// ---- model records ---------------------------------------------------------

struct ModelRecord {
  std::string id;
  Vector weights;  // dim + 1, bias last
  DataWindow memory;
  DeltaBand band;
  double omega = 0.0;
  long created_at = 0;
  long last_evaluated = 0;
  // memory.labeled_revision() at the last fit.
  std::size_t trained_revision = 0;
};

double predict_raw(const ModelRecord& model, const DataPoint& x);
double effective_lambda(const DeltaBand& band, const PoolConfig& cfg);

// Fits a fresh model. Every point becomes memory; only labeled points are
// used for fitting. Throws TrainingDeferred below cfg.min_train labels or
// when one class is missing.
ModelRecord train_classifier(std::string id, std::span<const DataPoint> data,
                             const PoolConfig& cfg, std::size_t dim, long created_at = 0);

// Warm-started refit on the memory's labeled subset; recomputes the band
// and the training f-score. Throws TrainingDeferred when a class is missing.
void retrain(ModelRecord& model, const PoolConfig& cfg);

// Empirical Δ-band of the memory's centroid distances.
DeltaBand memory_band(const DataWindow& memory, double delta);

// Points that fell in no model's band; oldest evicted first.
class GeneralMemory {
 public:
  explicit GeneralMemory(std::size_t capacity = kDefaultWindowSize);

  void push(DataPoint point);
  void clear() { points_.clear(); }
  bool set_label(const std::string& point_id, Label label, LabelSource source);

  std::size_t size() const { return points_.size(); }
  std::size_t capacity() const { return capacity_; }
  const std::deque<DataPoint>& points() const { return points_; }
  std::size_t labeled_count() const;
  bool has_both_classes() const;

 private:
  std::size_t capacity_;
  std::deque<DataPoint> points_;
};

// Immutable view of one model for the prediction path.
struct ModelView {
  std::string id;
  Vector weights;
  Vector centroid;
  DeltaBand band;
  double omega = 0.0;
  long created_at = 0;
};

struct PoolSnapshot {
  std::vector<ModelView> models;
};

class Pool {
 public:
  explicit Pool(std::size_t dim, const PoolConfig& cfg = {});

  std::size_t dim() const { return dim_; }
  std::vector<ModelRecord>& models() { return models_; }
  const std::vector<ModelRecord>& models() const { return models_; }
  GeneralMemory& general() { return general_; }
  const GeneralMemory& general() const { return general_; }
  bool empty() const { return models_.empty(); }

  ModelRecord* find(std::string_view id);
  std::string next_model_id();
  std::size_t id_counter() const { return next_id_; }
  void set_id_counter(std::size_t next) { next_id_ = next; }

  // Labels every stored copy of the point (model memories and general memory).
  void apply_label(const std::string& point_id, Label label, LabelSource source);

  std::shared_ptr<const PoolSnapshot> snapshot() const;

 private:
  std::size_t dim_;
  std::vector<ModelRecord> models_;
  GeneralMemory general_;
  std::size_t next_id_ = 1;
};

// ---- routing (update / generation) ---------------------------------------

struct RoutingOutcome {
  std::vector<std::string> models_appended;  // Δ-band or generalization-band hits
  std::vector<std::string> updated;          // fine-tuned on a corroborative label
  bool general_memory_hit = false;

  bool operator==(const RoutingOutcome&) const = default;
};

// Routes one point through the k nearest models: Δ-band hits join the
// model's memory (and fine-tune it when the point carries a corroborative
// label), generalization-band hits join the memory only, and a point with no
// Δ-band hit goes to general memory.
RoutingOutcome process_point(Pool& pool, const DataPoint& x, const PoolConfig& cfg);

// Fine-tune step for a label that arrives after its point was routed: one
// gradient step at learn_rate / 10 on each of the k nearest models whose
// Δ-band contains the point. Returns the ids of the updated models.
std::vector<std::string> fine_tune(Pool& pool, const DataPoint& x, const PoolConfig& cfg);

struct PoolDelta {
  std::vector<std::string> retrained;
  std::vector<std::string> generated;
  std::vector<std::string> notes;  // deferrals and skips, for the run log

  bool empty() const { return retrained.empty() && generated.empty(); }
};

// Retrains drifted models whose labeled memory changed since their last fit
// and generates a model from general memory once it holds enough labels.
PoolDelta on_drift(Pool& pool, std::span<const DriftVerdict> verdicts, const PoolConfig& cfg,
                   long window_index = 0);

// ω := f-score of each model over the labeled points inside its Δ-band.
// Models without in-band evidence keep their score.
void evaluate_models(Pool& pool, std::span<const DataPoint> labeled, const PoolConfig& cfg,
                     long window_index = 0);

}  // namespace teamdrift
