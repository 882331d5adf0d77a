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


#include "augbias/policy.hpp"

#include <algorithm>
#include <utility>

namespace augbias {

std::optional<Strength> AugPolicy::strength_for(const ClassId& cls) const {
  auto it = overrides.find(cls);
  if (it == overrides.end()) return default_strength;
  return it->second;
}

AugPolicy uniform_policy(Strength s) {
  AugPolicy p;
  p.default_strength = s;
  return p;
}

Strength optimal_strength(const MetricCurves& curves, const ClassId& cls, LabelMode mode) {
  if (curves.grid.empty()) throw ValidationError("optimal_strength on an empty grid");
  if (mode == LabelMode::multilabel && !curves.has_multilabel) {
    throw ValidationError("multilabel FP/FN curves are not available");
  }
  const auto k = curves.class_index(cls);
  const auto fp = curves.fp_curve(k, mode);
  const auto fn = curves.fn_curve(k, mode);
  if (fp.size() != curves.grid.size() || fn.size() != curves.grid.size()) {
    throw ValidationError("FP/FN curve of '" + cls + "' does not cover the grid");
  }
  std::size_t best = 0;
  for (std::size_t g = 1; g < curves.grid.size(); ++g) {
    if (fp[g] + fn[g] < fp[best] + fn[best]) best = g;
  }
  return curves.grid[best];
}

std::vector<ClassId> select_intervention_classes(const MetricCurves& curves, std::size_t m,
                                                 LabelMode mode) {
  if (m > curves.classes.size()) {
    throw ValidationError("m = " + std::to_string(m) + " exceeds the number of classes (" +
                          std::to_string(curves.classes.size()) + ")");
  }
  if (mode == LabelMode::multilabel && !curves.has_multilabel) {
    throw ValidationError("multilabel FP/FN curves are not available");
  }
  std::vector<std::pair<double, ClassId>> ranked;
  for (auto& [cls, growth] : fp_growth(curves, mode)) ranked.emplace_back(growth, cls);
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::vector<ClassId> out;
  for (std::size_t i = 0; i < m; ++i) out.push_back(std::move(ranked[i].second));
  return out;
}

AugPolicy build_policy(const MetricCurves& curves, std::size_t m, LabelMode mode) {
  if (curves.grid.empty()) throw ValidationError("build_policy on an empty grid");
  AugPolicy policy;
  policy.default_strength = curves.grid.front();
  policy.provenance = {"fp_fn_argmin", m, "delta_fp", mode, select_intervention_classes(curves, m, mode)};
  for (const auto& cls : policy.provenance.selected) {
    const auto s = optimal_strength(curves, cls, mode);
    if (s != policy.default_strength) policy.overrides.emplace(cls, s);
  }
  return policy;
}

AugPolicy baseline_remove_augmentation(const std::vector<ClassId>& affected, Strength strongest) {
  AugPolicy policy;
  policy.default_strength = strongest;
  policy.provenance.kind = "remove_augmentation";
  policy.provenance.m = affected.size();
  policy.provenance.metric = "delta_acc";
  policy.provenance.selected = affected;
  for (const auto& cls : affected) policy.overrides[cls] = std::nullopt;
  return policy;
}

}  // namespace augbias
