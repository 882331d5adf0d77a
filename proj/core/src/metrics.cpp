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


#include "augbias/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace augbias {

namespace {

std::size_t index_in(const std::vector<ClassId>& sorted, const ClassId& id) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), id);
  if (it == sorted.end() || *it != id) throw ValidationError("unknown class '" + id + "'");
  return static_cast<std::size_t>(it - sorted.begin());
}

// max_s v(s) - v(strongest), skipping absent points.
std::optional<double> drop_from_max(const std::vector<std::optional<double>>& curve) {
  if (curve.empty() || !curve.front()) return std::nullopt;
  double best = *curve.front();
  for (const auto& v : curve) {
    if (v) best = std::max(best, *v);
  }
  return best - *curve.front();
}

// v(strongest) - min_s v(s), skipping absent points.
double growth_from_min(const std::vector<std::optional<double>>& curve) {
  if (curve.empty() || !curve.front()) return 0.0;
  double lowest = *curve.front();
  for (const auto& v : curve) {
    if (v) lowest = std::min(lowest, *v);
  }
  return *curve.front() - lowest;
}

}  // namespace

// ---------------------------------------------------------------------------

void PredictionLog::add(PredictionRecord record) {
  Key key{record.strength, record.seed, record.sample_id};
  if (!seen_.insert(key).second) {
    throw ValidationError("duplicate prediction for (s=" + to_string(record.strength) +
                          ", seed=" + std::to_string(record.seed) + ", sample=" +
                          record.sample_id + ")");
  }
  records_.push_back(std::move(record));
}

std::vector<Strength> PredictionLog::strengths() const {
  std::set<Strength> grid;
  for (const auto& r : records_) grid.insert(r.strength);
  return {grid.begin(), grid.end()};
}

void AnnotationSet::validate() const {
  if (!multilabel) return;
  for (const auto& [sample, labels] : *multilabel) {
    if (!original.contains(sample)) {
      throw ValidationError("sample '" + sample + "' has multilabel annotations but no original label");
    }
  }
}

std::vector<ClassId> AnnotationSet::class_universe() const {
  std::set<ClassId> all(declared_classes.begin(), declared_classes.end());
  for (const auto& [sample, label] : original) all.insert(label);
  if (multilabel) {
    for (const auto& [sample, labels] : *multilabel) all.insert(labels.begin(), labels.end());
  }
  if (train_counts) {
    for (const auto& [cls, n] : *train_counts) all.insert(cls);
  }
  return {all.begin(), all.end()};
}

const std::set<ClassId>* AnnotationSet::labels_of(const SampleId& sample) const {
  if (!multilabel) return nullptr;
  auto it = multilabel->find(sample);
  return it == multilabel->end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------

std::int64_t RunCounts::confusion_count(std::size_t true_class, std::size_t predicted) const {
  if (true_class == predicted) return classes.at(true_class).correct;
  auto it = confusions.find({true_class, predicted});
  return it == confusions.end() ? 0 : it->second;
}

std::optional<double> RunCounts::confusion_rate(std::size_t k, std::size_t l) const {
  const auto support = classes.at(k).support;
  if (support == 0) return std::nullopt;
  return static_cast<double>(confusion_count(k, l)) / static_cast<double>(support);
}

std::optional<double> RunCounts::accuracy(std::size_t k, LabelMode mode) const {
  const auto& c = classes.at(k);
  if (mode == LabelMode::original) {
    if (c.support == 0) return std::nullopt;
    return static_cast<double>(c.correct) / static_cast<double>(c.support);
  }
  if (c.support_real == 0) return std::nullopt;
  return static_cast<double>(c.correct_real) / static_cast<double>(c.support_real);
}

std::vector<Strength> EvaluationTable::grid() const {
  std::vector<Strength> out;
  for (const auto& [key, counts] : runs) {
    if (out.empty() || out.back() != key.strength) out.push_back(key.strength);
  }
  return out;
}

std::vector<std::int64_t> EvaluationTable::seeds_at(Strength s) const {
  std::vector<std::int64_t> out;
  for (auto it = runs.lower_bound(RunKey{s, INT64_MIN}); it != runs.end() && it->first.strength == s; ++it) {
    out.push_back(it->first.seed);
  }
  return out;
}

std::size_t EvaluationTable::class_index(const ClassId& id) const { return index_in(classes, id); }

EvaluationTable tabulate(const PredictionLog& log, const AnnotationSet& ann) {
  ann.validate();
  EvaluationTable table;
  table.classes = ann.class_universe();
  table.has_multilabel = ann.multilabel.has_value();
  const std::size_t n = table.classes.size();

  // Resolve label sets to indices once per sample.
  std::unordered_map<std::string_view, std::size_t> truth;
  truth.reserve(ann.original.size());
  for (const auto& [sample, label] : ann.original) truth.emplace(sample, index_in(table.classes, label));
  std::unordered_map<std::string_view, std::vector<std::size_t>> multi;
  if (ann.multilabel) {
    for (const auto& [sample, labels] : *ann.multilabel) {
      auto& v = multi[sample];
      for (const auto& l : labels) v.push_back(index_in(table.classes, l));
    }
  }

  for (const auto& rec : log.records()) {
    auto t_it = truth.find(rec.sample_id);
    if (t_it == truth.end()) {
      throw ValidationError("prediction for unknown sample '" + rec.sample_id + "'");
    }
    const std::size_t t = t_it->second;
    const std::size_t p = index_in(table.classes, rec.predicted);

    auto& run = table.runs[RunKey{rec.strength, rec.seed}];
    if (run.classes.empty()) run.classes.resize(n);

    auto& ct = run.classes[t];
    ++ct.support;
    if (p == t) {
      ++ct.correct;
    } else {
      ++ct.fn;
      ++run.classes[p].fp;
      ++run.confusions[{t, p}];
    }

    auto m_it = multi.find(rec.sample_id);
    if (m_it == multi.end() || m_it->second.empty()) continue;
    const auto& labels = m_it->second;
    const bool hit = std::find(labels.begin(), labels.end(), p) != labels.end();
    ++ct.support_real;
    if (hit) {
      ++ct.correct_real;
    } else {
      ++run.classes[p].fp_real;
      for (std::size_t k : labels) ++run.classes[k].fn_real;
    }
  }
  return table;
}

// ---------------------------------------------------------------------------

MeanSe mean_and_se(std::span<const double> values) {
  MeanSe out;
  if (values.empty()) return out;
  const double n = static_cast<double>(values.size());
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return out;
}

std::size_t MetricCurves::class_index(const ClassId& id) const { return index_in(classes, id); }

const ClassPoint& MetricCurves::at(const ClassId& id, std::size_t grid_index) const {
  return points.at(class_index(id)).at(grid_index);
}

std::vector<std::optional<double>> MetricCurves::accuracy_curve(std::size_t k, LabelMode mode) const {
  std::vector<std::optional<double>> out;
  out.reserve(grid.size());
  for (const auto& p : points.at(k)) {
    const auto& acc = mode == LabelMode::original ? p.acc_original : p.acc_real;
    out.push_back(acc ? std::optional<double>(acc->mean) : std::nullopt);
  }
  return out;
}

std::vector<double> MetricCurves::fp_curve(std::size_t k, LabelMode mode) const {
  std::vector<double> out;
  for (const auto& p : points.at(k)) out.push_back(mode == LabelMode::original ? p.fp_original : p.fp_real);
  return out;
}

std::vector<double> MetricCurves::fn_curve(std::size_t k, LabelMode mode) const {
  std::vector<double> out;
  for (const auto& p : points.at(k)) out.push_back(mode == LabelMode::original ? p.fn_original : p.fn_real);
  return out;
}

MetricCurves metric_curves(const EvaluationTable& table) {
  MetricCurves curves;
  curves.classes = table.classes;
  curves.grid = table.grid();
  curves.has_multilabel = table.has_multilabel;
  const std::size_t n = table.classes.size();
  curves.points.assign(n, std::vector<ClassPoint>(curves.grid.size()));

  for (std::size_t g = 0; g < curves.grid.size(); ++g) {
    std::vector<const RunCounts*> runs;
    for (auto seed : table.seeds_at(curves.grid[g])) runs.push_back(&table.runs.at({curves.grid[g], seed}));
    const double seeds = static_cast<double>(runs.size());

    for (std::size_t k = 0; k < n; ++k) {
      ClassPoint& pt = curves.points[k][g];
      pt.seeds = runs.size();
      std::vector<double> acc;
      std::vector<double> acc_real;
      for (const RunCounts* run : runs) {
        const auto& c = run->classes[k];
        if (auto a = run->accuracy(k, LabelMode::original)) acc.push_back(*a);
        if (auto a = run->accuracy(k, LabelMode::multilabel)) acc_real.push_back(*a);
        pt.fp_original += static_cast<double>(c.fp);
        pt.fp_real += static_cast<double>(c.fp_real);
        pt.fn_original += static_cast<double>(c.fn);
        pt.fn_real += static_cast<double>(c.fn_real);
      }
      if (!acc.empty()) pt.acc_original = mean_and_se(acc);
      if (!acc_real.empty()) pt.acc_real = mean_and_se(acc_real);
      if (seeds > 0) {
        pt.fp_original /= seeds;
        pt.fp_real /= seeds;
        pt.fn_original /= seeds;
        pt.fn_real /= seeds;
      }
    }
  }
  return curves;
}

MetricCurves per_class_accuracy(const PredictionLog& log, const AnnotationSet& ann, LabelMode mode) {
  if (mode == LabelMode::multilabel && !ann.multilabel) {
    throw ValidationError("multilabel accuracy requested but no multilabel annotations were supplied");
  }
  return metric_curves(tabulate(log, ann));
}

MetricCurves fp_fn_counts(const PredictionLog& log, const AnnotationSet& ann, LabelMode mode) {
  return per_class_accuracy(log, ann, mode);
}

std::map<ClassId, AccuracyDrop> accuracy_drop(const MetricCurves& curves) {
  if (curves.grid.size() < 2) {
    throw ValidationError("accuracy drop needs at least two strengths, got " +
                          std::to_string(curves.grid.size()));
  }
  std::map<ClassId, AccuracyDrop> out;
  for (std::size_t k = 0; k < curves.classes.size(); ++k) {
    AccuracyDrop d;
    d.original = drop_from_max(curves.accuracy_curve(k, LabelMode::original));
    if (curves.has_multilabel) d.real = drop_from_max(curves.accuracy_curve(k, LabelMode::multilabel));
    out.emplace(curves.classes[k], d);
  }
  return out;
}

std::map<ClassId, double> fp_growth(const MetricCurves& curves, LabelMode mode) {
  std::map<ClassId, double> out;
  for (std::size_t k = 0; k < curves.classes.size(); ++k) {
    const auto fp = curves.fp_curve(k, mode);
    std::vector<std::optional<double>> curve(fp.begin(), fp.end());
    out.emplace(curves.classes[k], growth_from_min(curve));
  }
  return out;
}

std::vector<ClassId> affected_classes(const MetricCurves& curves, const AffectedSelector& selector,
                                      LabelMode mode) {
  std::vector<std::pair<double, ClassId>> ranked;
  for (const auto& [cls, drop] : accuracy_drop(curves)) {
    const auto& d = mode == LabelMode::original ? drop.original : drop.real;
    if (d) ranked.emplace_back(*d, cls);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });

  std::vector<ClassId> out;
  if (const auto* top = std::get_if<TopN>(&selector)) {
    for (std::size_t i = 0; i < ranked.size() && i < top->n; ++i) out.push_back(ranked[i].second);
  } else {
    const double threshold = std::get<MinDrop>(selector).threshold;
    for (const auto& [d, cls] : ranked) {
      if (d >= threshold) out.push_back(cls);
    }
  }
  return out;
}

std::vector<std::optional<double>> group_average(const MetricCurves& curves,
                                                 std::span<const ClassId> class_set, LabelMode mode) {
  if (class_set.empty()) throw ValidationError("group_average over an empty class set");
  std::vector<std::size_t> idx;
  for (const auto& c : class_set) idx.push_back(curves.class_index(c));

  std::vector<std::optional<double>> out(curves.grid.size());
  for (std::size_t g = 0; g < curves.grid.size(); ++g) {
    double sum = 0.0;
    std::size_t present = 0;
    for (std::size_t k : idx) {
      const auto& p = curves.points[k][g];
      const auto& acc = mode == LabelMode::original ? p.acc_original : p.acc_real;
      if (acc) {
        sum += acc->mean;
        ++present;
      }
    }
    if (present > 0) out[g] = sum / static_cast<double>(present);
  }
  return out;
}

std::vector<ClassId> underrepresented_classes(const AnnotationSet& ann, std::int64_t threshold) {
  if (!ann.train_counts) throw ValidationError("underrepresented_classes requires training-set counts");
  std::vector<ClassId> out;
  for (const auto& [cls, n] : *ann.train_counts) {
    if (n < threshold) out.push_back(cls);
  }
  return out;
}

// ---------------------------------------------------------------------------

std::size_t ConfusionCurves::class_index(const ClassId& id) const { return index_in(classes, id); }

std::optional<double> ConfusionCurves::rate(std::size_t k, std::size_t l, std::size_t g) const {
  auto it = rates.find({k, l});
  if (it != rates.end()) return it->second.at(g);
  return 0.0;
}

double ConfusionCurves::delta(std::size_t k, std::size_t l) const {
  auto it = rates.find({k, l});
  return it == rates.end() ? 0.0 : growth_from_min(it->second);
}

double ConfusionCurves::delta_reverse(std::size_t k, std::size_t l) const {
  auto it = rates.find({k, l});
  if (it == rates.end()) return 0.0;
  return drop_from_max(it->second).value_or(0.0);
}

std::vector<ConfusionCurves::Pair> ConfusionCurves::growing_pairs(double min_delta) const {
  std::vector<Pair> out;
  for (const auto& [kl, curve] : rates) {
    const double d = growth_from_min(curve);
    if (d >= min_delta) out.push_back({kl.first, kl.second, d});
  }
  std::sort(out.begin(), out.end(), [](const Pair& a, const Pair& b) {
    if (a.delta != b.delta) return a.delta > b.delta;
    return std::tie(a.k, a.l) < std::tie(b.k, b.l);
  });
  return out;
}

ConfusionCurves confusion_curves(const EvaluationTable& table) {
  ConfusionCurves out;
  out.classes = table.classes;
  out.grid = table.grid();

  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& [key, run] : table.runs) {
    for (const auto& [kl, count] : run.confusions) pairs.insert(kl);
  }
  for (const auto& kl : pairs) {
    std::vector<std::optional<double>> curve(out.grid.size());
    for (std::size_t g = 0; g < out.grid.size(); ++g) {
      std::vector<double> per_seed;
      for (auto seed : table.seeds_at(out.grid[g])) {
        if (auto r = table.runs.at({out.grid[g], seed}).confusion_rate(kl.first, kl.second)) {
          per_seed.push_back(*r);
        }
      }
      if (!per_seed.empty()) curve[g] = mean_and_se(per_seed).mean;
    }
    out.rates.emplace(kl, std::move(curve));
  }
  return out;
}

ConfusionCurves confusion_rates(const PredictionLog& log, const AnnotationSet& ann) {
  return confusion_curves(tabulate(log, ann));
}

}  // namespace augbias
