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


#ifndef AUGBIAS_METRICS_HPP_
#define AUGBIAS_METRICS_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "augbias/common.hpp"

namespace augbias {

// ---------------------------------------------------------------------------
// Inputs
// ---------------------------------------------------------------------------

struct PredictionRecord {
  std::string run_id;
  Strength strength;
  std::int64_t seed;
  SampleId sample_id;
  ClassId predicted;
};

/// Per-sample predictions indexed by (strength, seed, sample). Each triple is
/// unique; add() rejects duplicates.
class PredictionLog {
 public:
  void add(PredictionRecord record);

  const std::vector<PredictionRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  /// Distinct strengths, ascending (strongest first).
  std::vector<Strength> strengths() const;

 private:
  struct Key {
    Strength strength;
    std::int64_t seed;
    SampleId sample;
    auto operator<=>(const Key&) const = default;
  };
  std::vector<PredictionRecord> records_;
  std::set<Key> seen_;
};

/// Single ("original") labels, optional multi-label sets and optional
/// training-set sizes per class.
struct AnnotationSet {
  std::map<SampleId, ClassId> original;
  std::optional<std::map<SampleId, std::set<ClassId>>> multilabel;
  std::optional<std::map<ClassId, std::int64_t>> train_counts;
  /// Extra classes that belong to the universe without appearing in any
  /// label (e.g. classes that are only ever predicted).
  std::set<ClassId> declared_classes;

  /// Throws ValidationError if a multilabel sample lacks an original label.
  void validate() const;

  /// Sorted union of every class mentioned by the annotations.
  std::vector<ClassId> class_universe() const;

  /// Multilabel set of a sample, or nullptr when absent.
  const std::set<ClassId>* labels_of(const SampleId& sample) const;
};

// ---------------------------------------------------------------------------
// Per-run counts
// ---------------------------------------------------------------------------

struct RunKey {
  Strength strength;
  std::int64_t seed;
  auto operator<=>(const RunKey&) const = default;
};

/// Raw counts of one class within one (strength, seed) run.
struct ClassCounts {
  std::int64_t support = 0;       // |X_k|
  std::int64_t correct = 0;       // pred == k over X_k
  std::int64_t support_real = 0;  // X_k restricted to non-empty multilabel sets
  std::int64_t correct_real = 0;  // pred in l(x) over that restricted X_k
  std::int64_t fp = 0;            // true != k, pred == k
  std::int64_t fp_real = 0;       // k not in l(x), pred == k
  std::int64_t fn = 0;            // x in X_k, pred != k
  std::int64_t fn_real = 0;       // k in l(x), pred not in l(x)

  bool operator==(const ClassCounts&) const = default;
};

struct RunCounts {
  std::vector<ClassCounts> classes;
  /// Off-diagonal confusion counts keyed by (true index, predicted index).
  std::map<std::pair<std::size_t, std::size_t>, std::int64_t> confusions;

  std::int64_t confusion_count(std::size_t true_class, std::size_t predicted) const;
  /// CR_{k->l} for this run; nullopt if class k has no samples.
  std::optional<double> confusion_rate(std::size_t k, std::size_t l) const;
  /// Original-label accuracy for this run; nullopt if class k has no samples.
  std::optional<double> accuracy(std::size_t k, LabelMode mode) const;
};

/// Everything the curve builders need, tabulated once from a log.
struct EvaluationTable {
  std::vector<ClassId> classes;
  bool has_multilabel = false;
  std::map<RunKey, RunCounts> runs;

  std::vector<Strength> grid() const;
  std::vector<std::int64_t> seeds_at(Strength s) const;
  std::size_t class_index(const ClassId& id) const;  // throws ValidationError
};

/// Tabulates per-run counts. Throws ValidationError for samples or predicted
/// classes unknown to the annotations.
EvaluationTable tabulate(const PredictionLog& log, const AnnotationSet& ann);

// ---------------------------------------------------------------------------
// Curves
// ---------------------------------------------------------------------------

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean across seeds
};

MeanSe mean_and_se(std::span<const double> values);

struct ClassPoint {
  std::optional<MeanSe> acc_original;
  std::optional<MeanSe> acc_real;
  double fp_original = 0.0;
  double fp_real = 0.0;
  double fn_original = 0.0;
  double fn_real = 0.0;
  std::size_t seeds = 0;
};

/// Per-class seed-aggregated curves over the strength grid.
struct MetricCurves {
  std::vector<ClassId> classes;
  std::vector<Strength> grid;  // ascending; grid.front() is the strongest
  bool has_multilabel = false;
  std::vector<std::vector<ClassPoint>> points;  // [class][grid index]

  std::size_t class_index(const ClassId& id) const;
  const ClassPoint& at(const ClassId& id, std::size_t grid_index) const;

  std::vector<std::optional<double>> accuracy_curve(std::size_t k, LabelMode mode) const;
  std::vector<double> fp_curve(std::size_t k, LabelMode mode) const;
  std::vector<double> fn_curve(std::size_t k, LabelMode mode) const;
};

MetricCurves metric_curves(const EvaluationTable& table);

/// Accuracy curves (original or multilabel) from raw inputs.
MetricCurves per_class_accuracy(const PredictionLog& log, const AnnotationSet& ann, LabelMode mode);

/// FP/FN curves from raw inputs. Same content as per_class_accuracy; the
/// mode only controls the precondition check.
MetricCurves fp_fn_counts(const PredictionLog& log, const AnnotationSet& ann, LabelMode mode);

struct AccuracyDrop {
  std::optional<double> original;
  std::optional<double> real;
};

/// Delta a_k = max_s a_k(s) - a_k(s_strongest) on seed means. Requires >= 2 grid points.
std::map<ClassId, AccuracyDrop> accuracy_drop(const MetricCurves& curves);

/// Delta FP_l = FP_l(s_strongest) - min_s FP_l(s) on seed means.
std::map<ClassId, double> fp_growth(const MetricCurves& curves, LabelMode mode);

struct TopN {
  std::size_t n;
};
struct MinDrop {
  double threshold;
};
using AffectedSelector = std::variant<TopN, MinDrop>;

/// Classes sorted by accuracy drop (descending, ties by class id), then
/// truncated by the selector. Classes without a defined drop are skipped.
std::vector<ClassId> affected_classes(const MetricCurves& curves, const AffectedSelector& selector,
                                      LabelMode mode);

/// Unweighted mean of seed-mean accuracies over class_set, per strength.
/// Absent accuracies are skipped; a point with no present class is nullopt.
std::vector<std::optional<double>> group_average(const MetricCurves& curves,
                                                 std::span<const ClassId> class_set,
                                                 LabelMode mode = LabelMode::original);

/// Classes whose training count is below threshold (sorted).
std::vector<ClassId> underrepresented_classes(const AnnotationSet& ann, std::int64_t threshold);

// ---------------------------------------------------------------------------
// Confusions
// ---------------------------------------------------------------------------

/// Seed-mean confusion rates for every ordered pair that is confused at
/// least once; every other pair is identically zero.
struct ConfusionCurves {
  std::vector<ClassId> classes;
  std::vector<Strength> grid;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::optional<double>>> rates;

  std::size_t class_index(const ClassId& id) const;

  /// Seed-mean CR_{k->l}(grid[g]); nullopt when class k has no samples there.
  std::optional<double> rate(std::size_t k, std::size_t l, std::size_t g) const;

  /// Delta CR_{k->l} = CR_{k->l}(s_strongest) - min_s CR_{k->l}(s).
  double delta(std::size_t k, std::size_t l) const;

  /// Delta CR*_{k->l} = max_s CR_{k->l}(s) - CR_{k->l}(s_strongest). For the
  /// reverse confusion of a pair (k, l) call delta_reverse(l, k).
  double delta_reverse(std::size_t k, std::size_t l) const;

  struct Pair {
    std::size_t k;
    std::size_t l;
    double delta;
  };
  /// Pairs with delta >= min_delta, ordered by delta descending, then (k, l).
  std::vector<Pair> growing_pairs(double min_delta) const;
};

ConfusionCurves confusion_curves(const EvaluationTable& table);
ConfusionCurves confusion_rates(const PredictionLog& log, const AnnotationSet& ann);

}  // namespace augbias

#endif  // AUGBIAS_METRICS_HPP_
