// Copyright (c) 2026, The augbias Authors. All rights reserved.
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


#ifndef AUGBIAS_SIMHARNESS_HPP_
#define AUGBIAS_SIMHARNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "augbias/common.hpp"
#include "augbias/metrics.hpp"
#include "augbias/policy.hpp"
#include "augbias/rng.hpp"

namespace augbias {

struct BlockPlacement {
  std::size_t block = 0;
  std::size_t slot = 0;
  double amplitude = 1.0;

  bool operator==(const BlockPlacement&) const = default;
};

/// Extra blocks pasted into a sample with some probability.
struct CoOccurrence {
  double probability = 0.0;
  std::vector<BlockPlacement> blocks;

  bool operator==(const CoOccurrence&) const = default;
};

struct SimClass {
  ClassId name;
  std::vector<BlockPlacement> composition;
  std::vector<CoOccurrence> co_occurrences;
  std::size_t train_count = 200;
  std::size_t val_count = 100;

  bool operator==(const SimClass&) const = default;
};

struct TrainerConfig {
  std::size_t epochs = 30;
  double learning_rate = 0.5;
  double label_smoothing = 0.1;
  std::size_t batch_size = 32;

  bool operator==(const TrainerConfig&) const = default;
};

struct SimConfig {
  std::size_t canvas_length = 16;
  std::size_t block_dim = 8;
  std::size_t num_blocks = 3;
  double prototype_scale = 0.2;
  std::uint64_t prototype_seed = 7;
  std::vector<SimClass> classes;
  double noise_sigma = 0.3;
  std::vector<Strength> grid;
  std::size_t seeds = 5;
  TrainerConfig trainer;
  std::uint64_t root_seed = 0;

  /// WHOLE = {A@0, B@L/2}, PART = {B@L/2} (occasionally with a faint A@0),
  /// DIST = {C@L/4}; grid {8, 40, 70, 100}, five seeds.
  static SimConfig canonical();

  void validate() const;
  std::size_t feature_dim() const { return canvas_length * block_dim; }
  std::size_t class_index(const ClassId& name) const;

  bool operator==(const SimConfig&) const = default;
};

struct SimSample {
  SampleId id;
  std::size_t label = 0;
  std::vector<double> features;  // canvas_length * block_dim, slot-major
  /// Classes whose base composition is fully present (always includes label).
  std::vector<std::size_t> content_labels;
};

struct SimDataset {
  std::vector<double> prototypes;  // num_blocks * block_dim
  std::vector<SimSample> train;
  std::vector<SimSample> val;
};

/// Frozen block prototypes drawn from N(0, prototype_scale^2).
std::vector<double> make_prototypes(const SimConfig& config);

SimDataset generate_dataset(const SimConfig& config, std::uint64_t seed);

/// u ~ U[s, 1], window of round(L * u) slots at a uniform start, zeros
/// elsewhere. s = 1 keeps every slot.
std::vector<double> crop_mask(std::span<const double> features, std::size_t canvas_length, double s, Rng& rng);

struct SoftmaxModel {
  std::size_t num_classes = 0;
  std::size_t dim = 0;
  std::vector<double> weights;  // num_classes x dim
  std::vector<double> bias;

  std::vector<double> logits(std::span<const double> x) const;
  /// Index of the largest logit (lowest index on ties).
  std::size_t predict(std::span<const double> x) const;

  bool operator==(const SoftmaxModel&) const = default;
};

/// Minibatch SGD on label-smoothed cross-entropy from zero weights. Each
/// sample is cropped every epoch at its class's policy strength. Throws
/// InternalError if the loss becomes non-finite.
SoftmaxModel train_classifier(const SimConfig& config, std::span<const SimSample> train, const AugPolicy& policy,
                              std::uint64_t seed);

/// Training seed of replicate `seed_index`; shared by every strength and policy.
std::uint64_t training_seed(const SimConfig& config, std::size_t seed_index);

struct SweepResult {
  PredictionLog log;
  AnnotationSet annotations;
};

/// One model per (strength, seed) evaluated on the validation split.
SweepResult sweep(const SimConfig& config);

/// Ground-truth annotations of a validation split.
AnnotationSet sim_annotations(const SimConfig& config, const SimDataset& data);

struct InterventionRow {
  std::string name;
  AugPolicy policy;
  MeanSe overall;
  std::optional<MeanSe> affected;
  std::optional<MeanSe> remaining;
};

struct InterventionResult {
  std::vector<ClassId> affected;
  std::vector<InterventionRow> rows;
};

/// Trains `config.seeds` models per policy and reports original-label
/// accuracy averaged over all, affected and remaining classes.
InterventionResult evaluate_policies(const SimConfig& config,
                                     const std::vector<std::pair<std::string, AugPolicy>>& policies,
                                     const std::vector<ClassId>& affected);

struct InterventionOptions {
  std::size_t affected_count = 1;  // top classes by original accuracy drop
  std::size_t m = 1;
  LabelMode mode = LabelMode::original;
};

/// Sweep, pick affected classes, then compare uniform strongest, the
/// remove-augmentation baseline and the FP+FN policy.
InterventionResult intervention_experiment(const SimConfig& config, const InterventionOptions& options);

}  // namespace augbias

#endif  // AUGBIAS_SIMHARNESS_HPP_
