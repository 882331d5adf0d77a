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


#ifndef AUGBIAS_TESTS_ORACLE_HPP_
#define AUGBIAS_TESTS_ORACLE_HPP_

// Brute-force re-count of every metric straight from the raw records. Kept
// deliberately naive: no index maps, no shared code with the library.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "augbias/metrics.hpp"
#include "augbias/rng.hpp"

namespace augbias::testing {

struct RawRecord {
  double s = 0.0;
  std::int64_t seed = 0;
  std::string sample;
  std::string pred;
};

struct RandomLog {
  std::vector<RawRecord> records;
  std::vector<std::string> classes;
  std::vector<double> grid;  // ascending
  AnnotationSet ann;
  PredictionLog log;
};

struct RandomLogLimits {
  int max_classes = 20;
  int max_samples = 500;
  int max_strengths = 4;
  int max_seeds = 3;
};

inline std::string class_name(int i) {
  std::string s = "c";
  if (i < 10) s += '0';
  return s + std::to_string(i);
}

/// Random log with empty and missing multilabel sets, predicted-only classes
/// and occasionally dropped records.
inline RandomLog random_log(std::uint64_t seed, const RandomLogLimits& lim = {}) {
  Rng rng(seed);
  RandomLog out;
  const int n_classes = static_cast<int>(rng.uniform_int(2, lim.max_classes));
  const int n_samples = static_cast<int>(rng.uniform_int(1, lim.max_samples));
  const int n_strengths = static_cast<int>(rng.uniform_int(2, lim.max_strengths));
  const int n_seeds = static_cast<int>(rng.uniform_int(1, lim.max_seeds));
  for (int i = 0; i < n_classes; ++i) out.classes.push_back(class_name(i));

  std::set<double> grid;
  const double pool[] = {8, 16, 25, 40, 55, 70, 85, 100};
  while (static_cast<int>(grid.size()) < n_strengths) grid.insert(pool[rng.uniform_int(0, 7)]);
  out.grid.assign(grid.begin(), grid.end());

  // Labels only come from a prefix so that the tail is predicted-only.
  const int labelled = static_cast<int>(rng.uniform_int(1, n_classes));
  const bool with_multi = rng.bernoulli(0.75);
  if (with_multi) out.ann.multilabel.emplace();
  for (int i = 0; i < n_samples; ++i) {
    const std::string id = "img" + std::to_string(i);
    const int t = static_cast<int>(rng.uniform_int(0, labelled - 1));
    out.ann.original[id] = out.classes[t];
    if (!with_multi) continue;
    const double u = rng.uniform();
    if (u < 0.1) continue;  // missing
    auto& set = (*out.ann.multilabel)[id];
    if (u < 0.2) continue;  // present but empty
    if (rng.bernoulli(0.8)) set.insert(out.classes[t]);
    const auto extra = rng.uniform_int(0, 2);
    for (int e = 0; e < extra; ++e) set.insert(out.classes[rng.uniform_int(0, n_classes - 1)]);
  }
  out.ann.declared_classes.insert(out.classes.begin(), out.classes.end());

  const double drop = rng.bernoulli(0.5) ? 0.05 : 0.0;
  for (double s : out.grid) {
    for (int sd = 0; sd < n_seeds; ++sd) {
      const double p_correct = 0.3 + 0.6 * s / 100.0;
      for (const auto& [id, truth] : out.ann.original) {
        if (rng.bernoulli(drop)) continue;
        std::string pred = rng.bernoulli(p_correct) ? truth : out.classes[rng.uniform_int(0, n_classes - 1)];
        out.records.push_back({s, sd, id, pred});
        out.log.add({"run", Strength(s), sd, id, pred});
      }
    }
  }
  return out;
}

struct BruteCounts {
  std::int64_t support = 0;
  std::int64_t correct = 0;
  std::int64_t support_real = 0;
  std::int64_t correct_real = 0;
  std::int64_t fp = 0;
  std::int64_t fp_real = 0;
  std::int64_t fn = 0;
  std::int64_t fn_real = 0;
};

class Oracle {
 public:
  explicit Oracle(const RandomLog& data) : d_(data) {
    for (const auto& r : d_.records) {
      runs_[{r.s, r.seed}].push_back(&r);
      ++pairs_[{r.s, r.seed}][{d_.ann.original.at(r.sample), r.pred}];
    }
  }

  std::vector<std::int64_t> seeds_at(double s) const {
    std::vector<std::int64_t> seeds;
    for (const auto& [id, recs] : runs_) {
      if (id.first == s) seeds.push_back(id.second);
    }
    return seeds;
  }

  std::vector<double> grid() const {
    std::set<double> g;
    for (const auto& [id, recs] : runs_) g.insert(id.first);
    return {g.begin(), g.end()};
  }

  BruteCounts counts(double s, std::int64_t seed, const std::string& k) const {
    auto memo = memo_.find({s, seed, k});
    if (memo != memo_.end()) return memo->second;
    BruteCounts c;
    for (const RawRecord* rp : run(s, seed)) {
      const RawRecord& r = *rp;
      const std::string& t = d_.ann.original.at(r.sample);
      if (t == k) {
        ++c.support;
        if (r.pred == k) ++c.correct;
        else ++c.fn;
      } else if (r.pred == k) {
        ++c.fp;
      }
      const std::set<std::string>* ml = nullptr;
      if (d_.ann.multilabel) {
        auto it = d_.ann.multilabel->find(r.sample);
        if (it != d_.ann.multilabel->end()) ml = &it->second;
      }
      if (ml == nullptr || ml->empty()) continue;
      const bool pred_in = ml->count(r.pred) > 0;
      const bool k_in = ml->count(k) > 0;
      if (t == k) {
        ++c.support_real;
        if (pred_in) ++c.correct_real;
      }
      if (r.pred == k && !k_in) ++c.fp_real;
      if (k_in && !pred_in) ++c.fn_real;
    }
    memo_.emplace(std::make_tuple(s, seed, k), c);
    return c;
  }

  std::int64_t confusions(double s, std::int64_t seed, const std::string& k, const std::string& l) const {
    auto it = pairs_.find({s, seed});
    if (it == pairs_.end()) return 0;
    auto c = it->second.find({k, l});
    return c == it->second.end() ? 0 : c->second;
  }

  std::optional<double> accuracy(double s, const std::string& k, bool real) const {
    double sum = 0.0;
    int n = 0;
    for (auto seed : seeds_at(s)) {
      const auto c = counts(s, seed, k);
      const auto den = real ? c.support_real : c.support;
      if (den == 0) continue;
      sum += static_cast<double>(real ? c.correct_real : c.correct) / static_cast<double>(den);
      ++n;
    }
    if (n == 0) return std::nullopt;
    return sum / n;
  }

  double fp(double s, const std::string& k, bool real) const {
    double sum = 0.0;
    const auto seeds = seeds_at(s);
    for (auto seed : seeds) {
      const auto c = counts(s, seed, k);
      sum += static_cast<double>(real ? c.fp_real : c.fp);
    }
    return seeds.empty() ? 0.0 : sum / static_cast<double>(seeds.size());
  }

  double fn(double s, const std::string& k, bool real) const {
    double sum = 0.0;
    const auto seeds = seeds_at(s);
    for (auto seed : seeds) {
      const auto c = counts(s, seed, k);
      sum += static_cast<double>(real ? c.fn_real : c.fn);
    }
    return seeds.empty() ? 0.0 : sum / static_cast<double>(seeds.size());
  }

  std::optional<double> cr(double s, const std::string& k, const std::string& l) const {
    double sum = 0.0;
    int n = 0;
    for (auto seed : seeds_at(s)) {
      const auto c = counts(s, seed, k);
      if (c.support == 0) continue;
      sum += static_cast<double>(confusions(s, seed, k, l)) / static_cast<double>(c.support);
      ++n;
    }
    if (n == 0) return std::nullopt;
    return sum / n;
  }

  std::optional<double> delta_acc(const std::string& k, bool real) const {
    const auto g = grid();
    const auto first = accuracy(g.front(), k, real);
    if (!first) return std::nullopt;
    double best = *first;
    for (double s : g) {
      if (auto a = accuracy(s, k, real)) best = std::max(best, *a);
    }
    return best - *first;
  }

  double delta_fp(const std::string& k, bool real) const {
    const auto g = grid();
    double lowest = fp(g.front(), k, real);
    for (double s : g) lowest = std::min(lowest, fp(s, k, real));
    return fp(g.front(), k, real) - lowest;
  }

  double delta_cr(const std::string& k, const std::string& l) const {
    const auto g = grid();
    const auto first = cr(g.front(), k, l);
    if (!first) return 0.0;
    double lowest = *first;
    for (double s : g) {
      if (auto v = cr(s, k, l)) lowest = std::min(lowest, *v);
    }
    return *first - lowest;
  }

  double delta_cr_star(const std::string& k, const std::string& l) const {
    const auto g = grid();
    const auto first = cr(g.front(), k, l);
    if (!first) return 0.0;
    double best = *first;
    for (double s : g) {
      if (auto v = cr(s, k, l)) best = std::max(best, *v);
    }
    return best - *first;
  }

 private:
  using RunId = std::pair<double, std::int64_t>;
  const std::vector<const RawRecord*>& run(double s, std::int64_t seed) const {
    static const std::vector<const RawRecord*> kNone;
    auto it = runs_.find({s, seed});
    return it == runs_.end() ? kNone : it->second;
  }

  const RandomLog& d_;
  std::map<RunId, std::vector<const RawRecord*>> runs_;
  std::map<RunId, std::map<std::pair<std::string, std::string>, std::int64_t>> pairs_;
  mutable std::map<std::tuple<double, std::int64_t, std::string>, BruteCounts> memo_;
};

}  // namespace augbias::testing

#endif  // AUGBIAS_TESTS_ORACLE_HPP_
