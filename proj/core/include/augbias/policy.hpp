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


#ifndef AUGBIAS_POLICY_HPP_
#define AUGBIAS_POLICY_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "augbias/common.hpp"
#include "augbias/metrics.hpp"

namespace augbias {

/// How a policy was derived. Empty kind for hand-written policies.
struct PolicyProvenance {
  std::string kind;  // "fp_fn_argmin", "remove_augmentation" or empty
  std::size_t m = 0;
  std::string metric;  // selection metric, e.g. "delta_fp"
  LabelMode mode = LabelMode::original;
  std::vector<ClassId> selected;

  bool operator==(const PolicyProvenance&) const = default;
};

/// Per-class crop strengths with a global default. An override of nullopt
/// disables augmentation for that class (deterministic resize only).
struct AugPolicy {
  Strength default_strength{100.0};
  std::map<ClassId, std::optional<Strength>> overrides;
  PolicyProvenance provenance;

  /// Strength for a class; nullopt means no augmentation.
  std::optional<Strength> strength_for(const ClassId& cls) const;

  bool operator==(const AugPolicy&) const = default;
};

/// Uniform policy at strength s.
AugPolicy uniform_policy(Strength s);

/// argmin over the grid of seed-mean FP + FN; ties go to the strongest strength.
Strength optimal_strength(const MetricCurves& curves, const ClassId& cls, LabelMode mode);

/// Top-m classes by FP growth, ties by class id. Throws if m exceeds the
/// number of classes.
std::vector<ClassId> select_intervention_classes(const MetricCurves& curves, std::size_t m,
                                                 LabelMode mode);

/// Strongest strength by default; each selected class gets its own s*.
/// Overrides equal to the default are dropped.
AugPolicy build_policy(const MetricCurves& curves, std::size_t m, LabelMode mode);

/// Strongest strength by default; affected classes get no augmentation.
AugPolicy baseline_remove_augmentation(const std::vector<ClassId>& affected, Strength strongest);

}  // namespace augbias

#endif  // AUGBIAS_POLICY_HPP_
