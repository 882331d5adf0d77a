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


#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "augbias/simharness.hpp"

namespace augbias {
namespace {

// Three classes on disjoint blocks and slots.
SimConfig disjoint_config(double sigma) {
  SimConfig c = SimConfig::canonical();
  c.noise_sigma = sigma;
  c.classes = {SimClass{"X", {{0, 0, 1.0}}, {}, 10, 10},
               SimClass{"Y", {{1, 8, 1.0}}, {}, 10, 10},
               SimClass{"Z", {{2, 4, 1.0}}, {}, 10, 10}};
  return c;
}

double accuracy(const SoftmaxModel& m, const std::vector<SimSample>& set) {
  double hit = 0;
  for (const auto& s : set) hit += m.predict(s.features) == s.label ? 1 : 0;
  return hit / static_cast<double>(set.size());
}

TEST(GenerateDataset, SizesAndLengths) {
  SimConfig c = disjoint_config(0.3);
  c.classes.resize(2);
  const auto d = generate_dataset(c, 5);
  EXPECT_EQ(d.train.size(), 20u);
  EXPECT_EQ(d.val.size(), 20u);
  for (const auto& s : d.train) EXPECT_EQ(s.features.size(), c.canvas_length * c.block_dim);
  EXPECT_EQ(d.prototypes.size(), c.num_blocks * c.block_dim);
}

TEST(GenerateDataset, NoNoiseMeansIdenticalSamples) {
  const auto d = generate_dataset(disjoint_config(0.0), 5);
  for (const auto& s : d.train) {
    const auto& first = *std::find_if(d.train.begin(), d.train.end(),
                                      [&](const SimSample& o) { return o.label == s.label; });
    EXPECT_EQ(s.features, first.features);
  }
}

TEST(GenerateDataset, NearestTemplateIsPerfectWithoutNoise) {
  const auto c = disjoint_config(0.0);
  const auto d = generate_dataset(c, 1);
  // Templates rebuilt from the prototypes alone.
  std::vector<std::vector<double>> templates;
  for (const auto& cls : c.classes) {
    std::vector<double> t(c.feature_dim(), 0.0);
    for (const auto& p : cls.composition) {
      for (std::size_t j = 0; j < c.block_dim; ++j) t[p.slot * c.block_dim + j] += p.amplitude * d.prototypes[p.block * c.block_dim + j];
    }
    templates.push_back(t);
  }
  for (const auto& s : d.val) {
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < templates.size(); ++k) {
      double dist = 0;
      for (std::size_t i = 0; i < s.features.size(); ++i) dist += std::pow(s.features[i] - templates[k][i], 2);
      if (dist < best_dist) {
        best_dist = dist;
        best = k;
      }
    }
    EXPECT_EQ(best, s.label);
  }
}

TEST(GenerateDataset, DeterministicAndSeedSensitive) {
  const auto c = SimConfig::canonical();
  const auto a = generate_dataset(c, 3);
  const auto b = generate_dataset(c, 3);
  const auto other = generate_dataset(c, 4);
  EXPECT_EQ(a.train[17].features, b.train[17].features);
  EXPECT_NE(a.train[17].features, other.train[17].features);
  EXPECT_EQ(a.prototypes, other.prototypes);
}

TEST(GenerateDataset, ContentLabelsFollowComposition) {
  SimConfig c = SimConfig::canonical();
  c.classes[c.class_index("PART")].co_occurrences[0].probability = 1.0;
  const auto d = generate_dataset(c, 0);
  const auto whole = c.class_index("WHOLE");
  const auto part = c.class_index("PART");
  for (const auto& s : d.val) {
    if (s.label == whole) EXPECT_EQ(s.content_labels, (std::vector<std::size_t>{whole, part}));
    // A faint A pasted into PART still completes WHOLE's block set.
    if (s.label == part) EXPECT_EQ(s.content_labels.size(), 2u);
  }
}

TEST(SimConfig, RejectsInvalidCompositions) {
  SimConfig c = SimConfig::canonical();
  c.classes[0].composition.push_back({9, 0, 1.0});
  EXPECT_THROW(c.validate(), ValidationError);
  c = SimConfig::canonical();
  c.classes[0].composition.push_back({0, 16, 1.0});
  EXPECT_THROW(c.validate(), ValidationError);
  c = SimConfig::canonical();
  c.trainer.label_smoothing = 1.0;
  EXPECT_THROW(c.validate(), ValidationError);
  c = SimConfig::canonical();
  c.classes[1].name = c.classes[0].name;
  EXPECT_THROW(c.validate(), ValidationError);
  EXPECT_NO_THROW(SimConfig::canonical().validate());
}

TEST(CropMask, FullStrengthIsIdentity) {
  const auto d = generate_dataset(SimConfig::canonical(), 0);
  Rng rng(1);
  EXPECT_EQ(crop_mask(d.train[0].features, 16, 1.0, rng), d.train[0].features);
  EXPECT_THROW(crop_mask(d.train[0].features, 16, 0.0, rng), ValidationError);
  EXPECT_THROW(crop_mask(d.train[0].features, 16, 1.5, rng), ValidationError);
}

TEST(CropMask, RetainedFractionFollowsUniformLaw) {
  const std::size_t L = 16;
  const std::vector<double> ones(L * 2, 1.0);
  for (double s : {0.08, 0.4, 0.7}) {
    Rng rng(static_cast<std::uint64_t>(s * 1000));
    double kept = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
      const auto m = crop_mask(ones, L, s, rng);
      for (double v : m) kept += v;
    }
    const double fraction = kept / (static_cast<double>(n) * ones.size());
    EXPECT_NEAR(fraction, (s + 1.0) / 2.0, 0.01 * (s + 1.0) / 2.0) << s;
  }
}

TEST(CropMask, WindowIsContiguous) {
  const std::vector<double> ones(16, 1.0);
  Rng rng(4);
  for (int i = 0; i < 1000; ++i) {
    const auto m = crop_mask(ones, 16, 0.08, rng);
    int transitions = 0;
    for (std::size_t j = 1; j < m.size(); ++j) transitions += m[j] != m[j - 1];
    EXPECT_LE(transitions, 2);
  }
}

TEST(TrainClassifier, SeparableDataIsFit) {
  SimConfig c = SimConfig::canonical();
  c.noise_sigma = 0.0;
  for (auto& cls : c.classes) cls.co_occurrences.clear();
  const auto d = generate_dataset(c, 0);
  const auto m = train_classifier(c, d.train, uniform_policy(Strength(100)), 1);
  EXPECT_GE(accuracy(m, d.train), 0.99);
}

TEST(TrainClassifier, ZeroEpochsGivesUniformLogits) {
  SimConfig c = SimConfig::canonical();
  c.trainer.epochs = 0;
  const auto d = generate_dataset(c, 0);
  const auto m = train_classifier(c, d.train, uniform_policy(Strength(8)), 1);
  for (double z : m.logits(d.val[0].features)) EXPECT_EQ(z, 0.0);
  EXPECT_NEAR(accuracy(m, d.val), 1.0 / 3.0, 1e-12);
}

TEST(TrainClassifier, SameSeedSameWeights) {
  const auto c = SimConfig::canonical();
  const auto d = generate_dataset(c, 0);
  const auto a = train_classifier(c, d.train, uniform_policy(Strength(8)), 9);
  const auto b = train_classifier(c, d.train, uniform_policy(Strength(8)), 9);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, train_classifier(c, d.train, uniform_policy(Strength(8)), 10));
}

TEST(TrainClassifier, DivergenceIsReported) {
  SimConfig c = SimConfig::canonical();
  c.prototype_scale = 1e200;
  const auto d = generate_dataset(c, 0);
  EXPECT_THROW(train_classifier(c, d.train, uniform_policy(Strength(8)), 1), InternalError);
}

TEST(Sweep, OneStrengthOneSeed) {
  SimConfig c = SimConfig::canonical();
  c.grid = {Strength(40)};
  c.seeds = 1;
  const auto r = sweep(c);
  EXPECT_EQ(r.log.size(), 300u);
  EXPECT_EQ(r.annotations.original.size(), 300u);
  EXPECT_EQ(r.log.records().front().run_id, "s40_seed0");
}

TEST(Sweep, ByteIdenticalAcrossRuns) {
  SimConfig c = SimConfig::canonical();
  c.seeds = 2;
  const auto a = sweep(c);
  const auto b = sweep(c);
  ASSERT_EQ(a.log.size(), b.log.size());
  for (std::size_t i = 0; i < a.log.size(); ++i) {
    EXPECT_EQ(a.log.records()[i].predicted, b.log.records()[i].predicted);
    EXPECT_EQ(a.log.records()[i].sample_id, b.log.records()[i].sample_id);
  }
}

TEST(Sweep, LogsSatisfyMetricIdentities) {
  const auto r = sweep(SimConfig::canonical());
  const auto table = tabulate(r.log, r.annotations);
  for (const auto& [key, run] : table.runs) {
    for (std::size_t k = 0; k < table.classes.size(); ++k) {
      const auto& c = run.classes[k];
      EXPECT_EQ(c.fn, c.support - c.correct);
      std::int64_t off = 0;
      for (std::size_t l = 0; l < table.classes.size(); ++l) {
        if (l != k) off += run.confusion_count(k, l);
      }
      EXPECT_EQ(off, c.support - c.correct);
    }
  }
}

TEST(Sweep, SyntheticMultilabelsMarkSharedContent) {
  const auto r = sweep(SimConfig::canonical());
  const auto& ml = *r.annotations.multilabel;
  EXPECT_EQ(ml.at("val_WHOLE_0000"), (std::set<ClassId>{"PART", "WHOLE"}));
  EXPECT_EQ(ml.at("val_DIST_0000"), (std::set<ClassId>{"DIST"}));
}

TEST(Intervention, ZeroMPolicyEqualsUniform) {
  SimConfig c = SimConfig::canonical();
  c.seeds = 2;
  const auto swept = sweep(c);
  const auto curves = metric_curves(tabulate(swept.log, swept.annotations));
  const auto res = evaluate_policies(
      c, {{"uniform", uniform_policy(Strength(8))}, {"m0", build_policy(curves, 0, LabelMode::original)}}, {"PART"});
  EXPECT_EQ(res.rows[0].overall.mean, res.rows[1].overall.mean);
  EXPECT_EQ(res.rows[0].affected->mean, res.rows[1].affected->mean);
  EXPECT_EQ(res.rows[0].remaining->mean, res.rows[1].remaining->mean);
}

TEST(Intervention, RowsAndAffectedSet) {
  SimConfig c = SimConfig::canonical();
  c.seeds = 2;
  const auto res = intervention_experiment(c, {});
  ASSERT_EQ(res.rows.size(), 3u);
  EXPECT_EQ(res.rows[0].name, "uniform");
  EXPECT_EQ(res.rows[1].name, "baseline");
  EXPECT_EQ(res.rows[2].name, "policy");
  EXPECT_EQ(res.affected, (std::vector<ClassId>{"PART"}));
  EXPECT_FALSE(res.rows[1].policy.strength_for("PART").has_value());
}

// Each configuration shrinks one side of the WHOLE / PART pair.
double drop_of(SimConfig c, const ClassId& small, const ClassId& probe) {
  c.classes[c.class_index(small)].train_count = 50;
  const auto r = sweep(c);
  return *accuracy_drop(metric_curves(tabulate(r.log, r.annotations))).at(probe).original;
}

TEST(Intervention, UnderrepresentedSideDegrades) {
  const auto c = SimConfig::canonical();
  EXPECT_GT(drop_of(c, "PART", "PART"), drop_of(c, "PART", "WHOLE"));
  EXPECT_GT(drop_of(c, "WHOLE", "WHOLE"), drop_of(c, "WHOLE", "PART"));
}

TEST(Sweep, DistractorIsUnaffectedByCropStrength) {
  SimConfig c = SimConfig::canonical();
  for (std::uint64_t root = 0; root < 3; ++root) {
    c.root_seed = root;
    const auto r = sweep(c);
    const auto drops = accuracy_drop(metric_curves(tabulate(r.log, r.annotations)));
    EXPECT_LT(*drops.at("DIST").original, 0.05) << "root " << root;
    EXPECT_GT(*drops.at("PART").original, 0.10) << "root " << root;
  }
}

}  // namespace
}  // namespace augbias
