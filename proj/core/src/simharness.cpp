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


#include "augbias/simharness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>

namespace augbias {

namespace {

constexpr std::uint64_t kDataStream = 0x64617461;   // "data"
constexpr std::uint64_t kTrainStream = 0x747261696e;  // "train"

std::string padded(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04zu", i);
  return buf;
}

SimDataset canonical_data(const SimConfig& config) {
  return generate_dataset(config, derive_seed(config.root_seed, {kDataStream}));
}

}  // namespace

SimConfig SimConfig::canonical() {
  SimConfig c;
  const std::size_t half = c.canvas_length / 2;
  const std::size_t quarter = c.canvas_length / 4;
  c.classes = {
      SimClass{"WHOLE", {{0, 0, 1.0}, {1, half, 1.0}}, {}, 200, 100},
      SimClass{"PART", {{1, half, 1.0}}, {CoOccurrence{0.1, {{0, 0, 0.5}}}}, 200, 100},
      SimClass{"DIST", {{2, quarter, 1.0}}, {}, 200, 100},
  };
  c.grid = {Strength(8), Strength(40), Strength(70), Strength(100)};
  return c;
}

void SimConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ValidationError("simulator config: " + msg); };
  if (canvas_length < 1 || block_dim < 1) fail("canvas_length and block_dim must be positive");
  if (num_blocks < 1) fail("num_blocks must be positive");
  if (!(prototype_scale > 0.0) || !std::isfinite(prototype_scale)) fail("prototype_scale must be positive");
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) fail("noise_sigma must be non-negative");
  if (classes.size() < 2) fail("at least two classes are required");
  if (grid.empty()) fail("strength grid is empty");
  if (seeds < 1) fail("seeds must be at least 1");
  if (!(trainer.learning_rate > 0.0)) fail("learning_rate must be positive");
  if (!(trainer.label_smoothing >= 0.0 && trainer.label_smoothing < 1.0)) fail("label_smoothing must lie in [0, 1)");
  if (trainer.batch_size < 1) fail("batch_size must be positive");

  auto check_placement = [&](const BlockPlacement& p, const ClassId& cls) {
    if (p.block >= num_blocks) fail("class '" + cls + "' uses unknown block " + std::to_string(p.block));
    if (p.slot >= canvas_length) fail("class '" + cls + "' places a block outside the canvas");
    if (!std::isfinite(p.amplitude)) fail("class '" + cls + "' has a non-finite amplitude");
  };
  std::set<ClassId> names;
  for (const auto& c : classes) {
    if (c.name.empty()) fail("class with an empty name");
    if (!names.insert(c.name).second) fail("duplicate class '" + c.name + "'");
    if (c.composition.empty()) fail("class '" + c.name + "' has an empty composition");
    if (c.train_count < 1 || c.val_count < 1) fail("class '" + c.name + "' needs at least one sample per split");
    for (const auto& p : c.composition) check_placement(p, c.name);
    for (const auto& co : c.co_occurrences) {
      if (!(co.probability >= 0.0 && co.probability <= 1.0)) fail("co-occurrence probability outside [0, 1]");
      for (const auto& p : co.blocks) check_placement(p, c.name);
    }
  }
}

std::size_t SimConfig::class_index(const ClassId& name) const {
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (classes[i].name == name) return i;
  }
  throw ValidationError("simulator has no class '" + name + "'");
}

std::vector<double> make_prototypes(const SimConfig& config) {
  Rng rng(config.prototype_seed);
  std::vector<double> p(config.num_blocks * config.block_dim);
  for (auto& v : p) v = rng.normal(0.0, config.prototype_scale);
  return p;
}

SimDataset generate_dataset(const SimConfig& config, std::uint64_t seed) {
  config.validate();
  SimDataset data;
  data.prototypes = make_prototypes(config);
  const std::size_t d = config.block_dim;

  auto make_split = [&](std::uint64_t stream, bool is_train) {
    Rng rng(derive_seed(seed, {stream}));
    std::vector<SimSample> out;
    for (std::size_t k = 0; k < config.classes.size(); ++k) {
      const auto& cls = config.classes[k];
      const std::size_t n = is_train ? cls.train_count : cls.val_count;
      for (std::size_t i = 0; i < n; ++i) {
        SimSample s;
        s.id = (is_train ? "train_" : "val_") + cls.name + "_" + padded(i);
        s.label = k;
        s.features.resize(config.feature_dim());
        for (auto& v : s.features) v = rng.normal(0.0, config.noise_sigma);

        std::set<std::pair<std::size_t, std::size_t>> present;
        auto paste = [&](const BlockPlacement& p) {
          for (std::size_t j = 0; j < d; ++j) {
            s.features[p.slot * d + j] += p.amplitude * data.prototypes[p.block * d + j];
          }
          present.emplace(p.block, p.slot);
        };
        for (const auto& p : cls.composition) paste(p);
        for (const auto& co : cls.co_occurrences) {
          if (rng.bernoulli(co.probability)) {
            for (const auto& p : co.blocks) paste(p);
          }
        }
        for (std::size_t l = 0; l < config.classes.size(); ++l) {
          const auto& comp = config.classes[l].composition;
          const bool contained = std::all_of(comp.begin(), comp.end(), [&](const BlockPlacement& p) {
            return present.contains({p.block, p.slot});
          });
          if (contained || l == k) s.content_labels.push_back(l);
        }
        out.push_back(std::move(s));
      }
    }
    return out;
  };
  data.train = make_split(1, true);
  data.val = make_split(2, false);
  return data;
}

std::vector<double> crop_mask(std::span<const double> features, std::size_t canvas_length, double s, Rng& rng) {
  if (!(s > 0.0 && s <= 1.0)) throw ValidationError("crop strength must lie in (0, 1]");
  if (canvas_length == 0 || features.size() % canvas_length != 0) {
    throw ValidationError("feature length is not a multiple of the canvas length");
  }
  const double u = rng.uniform(s, 1.0);
  const auto len = std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(static_cast<double>(canvas_length) * u)),
                                           1, canvas_length);
  const auto start = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(canvas_length - len)));
  const std::size_t d = features.size() / canvas_length;
  std::vector<double> out(features.size(), 0.0);
  std::copy(features.begin() + static_cast<std::ptrdiff_t>(start * d),
            features.begin() + static_cast<std::ptrdiff_t>((start + len) * d),
            out.begin() + static_cast<std::ptrdiff_t>(start * d));
  return out;
}

std::vector<double> SoftmaxModel::logits(std::span<const double> x) const {
  if (x.size() != dim) throw ValidationError("feature length does not match the model");
  std::vector<double> z(bias);
  for (std::size_t k = 0; k < num_classes; ++k) {
    const double* w = weights.data() + k * dim;
    z[k] += std::inner_product(x.begin(), x.end(), w, 0.0);
  }
  return z;
}

std::size_t SoftmaxModel::predict(std::span<const double> x) const {
  const auto z = logits(x);
  return static_cast<std::size_t>(std::max_element(z.begin(), z.end()) - z.begin());
}

std::uint64_t training_seed(const SimConfig& config, std::size_t seed_index) {
  return derive_seed(config.root_seed, {kTrainStream, seed_index});
}

SoftmaxModel train_classifier(const SimConfig& config, std::span<const SimSample> train, const AugPolicy& policy,
                              std::uint64_t seed) {
  config.validate();
  const std::size_t K = config.classes.size();
  const std::size_t D = config.feature_dim();
  const auto& hp = config.trainer;

  std::vector<std::optional<double>> crop(K);
  for (std::size_t k = 0; k < K; ++k) {
    if (auto s = policy.strength_for(config.classes[k].name); s && s->percent() < 100.0) crop[k] = s->fraction();
  }

  SoftmaxModel model{K, D, std::vector<double>(K * D, 0.0), std::vector<double>(K, 0.0)};
  Rng rng(seed);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> grad_w(K * D);
  std::vector<double> grad_b(K);
  const double off = hp.label_smoothing / static_cast<double>(K);
  const double on = 1.0 - hp.label_smoothing + off;

  for (std::size_t epoch = 0; epoch < hp.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i - 1)))]);
    }
    for (std::size_t b0 = 0; b0 < order.size(); b0 += hp.batch_size) {
      const std::size_t b1 = std::min(order.size(), b0 + hp.batch_size);
      std::fill(grad_w.begin(), grad_w.end(), 0.0);
      std::fill(grad_b.begin(), grad_b.end(), 0.0);
      double loss = 0.0;
      for (std::size_t bi = b0; bi < b1; ++bi) {
        const auto& s = train[order[bi]];
        if (s.features.size() != D) throw ValidationError("sample '" + s.id + "' has the wrong feature length");
        std::vector<double> x = crop[s.label] ? crop_mask(s.features, config.canvas_length, *crop[s.label], rng)
                                              : s.features;
        auto z = model.logits(x);
        const double zmax = *std::max_element(z.begin(), z.end());
        double norm = 0.0;
        for (auto& v : z) norm += (v = std::exp(v - zmax));
        for (std::size_t k = 0; k < K; ++k) {
          const double p = z[k] / norm;
          const double t = k == s.label ? on : off;
          if (t > 0.0) loss -= t * std::log(std::max(p, 1e-300));
          const double g = p - t;
          grad_b[k] += g;
          double* gw = grad_w.data() + k * D;
          for (std::size_t j = 0; j < D; ++j) gw[j] += g * x[j];
        }
      }
      if (!std::isfinite(loss)) {
        std::ostringstream msg;
        msg << "training diverged at epoch " << epoch << ", batch " << b0 / hp.batch_size
            << " (loss " << loss << ", learning rate " << hp.learning_rate << ")";
        throw InternalError(msg.str());
      }
      const double step = hp.learning_rate / static_cast<double>(b1 - b0);
      for (std::size_t i = 0; i < K * D; ++i) model.weights[i] -= step * grad_w[i];
      for (std::size_t k = 0; k < K; ++k) model.bias[k] -= step * grad_b[k];
      const auto finite = [](double w) { return std::isfinite(w); };
      if (!std::all_of(model.weights.begin(), model.weights.end(), finite) ||
          !std::all_of(model.bias.begin(), model.bias.end(), finite)) {
        std::ostringstream msg;
        msg << "training produced non-finite weights at epoch " << epoch << ", batch " << b0 / hp.batch_size
            << " (learning rate " << hp.learning_rate << ")";
        throw InternalError(msg.str());
      }
    }
  }
  return model;
}

AnnotationSet sim_annotations(const SimConfig& config, const SimDataset& data) {
  AnnotationSet ann;
  ann.multilabel.emplace();
  ann.train_counts.emplace();
  for (const auto& c : config.classes) {
    ann.declared_classes.insert(c.name);
    (*ann.train_counts)[c.name] = static_cast<std::int64_t>(c.train_count);
  }
  for (const auto& s : data.val) {
    ann.original[s.id] = config.classes[s.label].name;
    auto& labels = (*ann.multilabel)[s.id];
    for (auto l : s.content_labels) labels.insert(config.classes[l].name);
  }
  return ann;
}

SweepResult sweep(const SimConfig& config) {
  config.validate();
  const auto data = canonical_data(config);
  SweepResult out;
  out.annotations = sim_annotations(config, data);
  for (const auto s : config.grid) {
    for (std::size_t i = 0; i < config.seeds; ++i) {
      const auto model = train_classifier(config, data.train, uniform_policy(s), training_seed(config, i));
      const std::string run = "s" + to_string(s) + "_seed" + std::to_string(i);
      for (const auto& v : data.val) {
        out.log.add({run, s, static_cast<std::int64_t>(i), v.id, config.classes[model.predict(v.features)].name});
      }
    }
  }
  return out;
}

InterventionResult evaluate_policies(const SimConfig& config,
                                     const std::vector<std::pair<std::string, AugPolicy>>& policies,
                                     const std::vector<ClassId>& affected) {
  config.validate();
  const auto data = canonical_data(config);
  const std::size_t K = config.classes.size();
  std::vector<bool> is_affected(K, false);
  for (const auto& c : affected) is_affected[config.class_index(c)] = true;
  const auto n_affected = static_cast<std::size_t>(std::count(is_affected.begin(), is_affected.end(), true));

  InterventionResult result;
  result.affected = affected;
  for (const auto& [name, policy] : policies) {
    std::vector<double> overall;
    std::vector<double> aff;
    std::vector<double> rest;
    for (std::size_t i = 0; i < config.seeds; ++i) {
      const auto model = train_classifier(config, data.train, policy, training_seed(config, i));
      std::vector<double> hit(K, 0.0);
      std::vector<double> total(K, 0.0);
      for (const auto& v : data.val) {
        total[v.label] += 1.0;
        hit[v.label] += model.predict(v.features) == v.label ? 1.0 : 0.0;
      }
      double sum_all = 0.0;
      double sum_aff = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        const double acc = 100.0 * hit[k] / total[k];
        sum_all += acc;
        if (is_affected[k]) sum_aff += acc;
      }
      overall.push_back(sum_all / static_cast<double>(K));
      if (n_affected > 0) aff.push_back(sum_aff / static_cast<double>(n_affected));
      if (n_affected < K) rest.push_back((sum_all - sum_aff) / static_cast<double>(K - n_affected));
    }
    InterventionRow row{name, policy, mean_and_se(overall), std::nullopt, std::nullopt};
    if (!aff.empty()) row.affected = mean_and_se(aff);
    if (!rest.empty()) row.remaining = mean_and_se(rest);
    result.rows.push_back(std::move(row));
  }
  return result;
}

InterventionResult intervention_experiment(const SimConfig& config, const InterventionOptions& options) {
  const auto swept = sweep(config);
  const auto curves = metric_curves(tabulate(swept.log, swept.annotations));
  const auto affected = affected_classes(curves, TopN{options.affected_count}, LabelMode::original);
  const Strength strongest = curves.grid.front();
  return evaluate_policies(config,
                           {{"uniform", uniform_policy(strongest)},
                            {"baseline", baseline_remove_augmentation(affected, strongest)},
                            {"policy", build_policy(curves, options.m, options.mode)}},
                           affected);
}

}  // namespace augbias
