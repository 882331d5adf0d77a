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


#ifndef AUGBIAS_IO_HPP_
#define AUGBIAS_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "augbias/common.hpp"
#include "augbias/metrics.hpp"
#include "augbias/policy.hpp"
#include "augbias/simharness.hpp"
#include "augbias/taxonomy.hpp"

namespace augbias {

inline constexpr int kFormatVersion = 1;

std::string_view toolkit_version();

struct ParseOptions {
  bool lax = false;  // ignore unknown JSON fields
};

/// Provenance block embedded in every emitted artifact.
struct RunManifest {
  std::string version;
  std::string config_hash;
  std::vector<std::pair<std::string, std::string>> inputs;  // path, digest
  std::string command;
  std::string timestamp;  // ISO 8601 UTC; excluded from determinism checks

  bool operator==(const RunManifest&) const = default;
};

/// 64-bit FNV-1a, 16 lowercase hex digits.
std::string fnv1a64_hex(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view text);

/// Digests the given inputs and stamps the current time, or SOURCE_DATE_EPOCH
/// when that variable is set.
RunManifest make_manifest(std::string command, const std::vector<std::filesystem::path>& inputs,
                          std::string_view config_text = {});

// Prediction logs: JSON Lines with an optional {"format_version": 1} header.

PredictionLog parse_prediction_log(std::istream& in, const ParseOptions& options = {});
PredictionLog read_prediction_log(const std::filesystem::path& path, const ParseOptions& options = {});
std::string serialize_prediction_log(const PredictionLog& log, const RunManifest* manifest = nullptr);

// Annotations.

std::map<SampleId, ClassId> parse_original_labels(std::istream& in, const ParseOptions& options = {});
std::map<SampleId, std::set<ClassId>> parse_multilabels(std::istream& in, const ParseOptions& options = {});
/// TSV rows "class<TAB>count".
std::map<ClassId, std::int64_t> parse_train_counts(std::istream& in);

AnnotationSet read_annotations(const std::filesystem::path& original,
                               const std::optional<std::filesystem::path>& multilabel,
                               const std::optional<std::filesystem::path>& counts, const ParseOptions& options = {});

std::string serialize_original_labels(const std::map<SampleId, ClassId>& labels);
std::string serialize_multilabels(const std::map<SampleId, std::set<ClassId>>& labels);
std::string serialize_train_counts(const std::map<ClassId, std::int64_t>& counts);

// Taxonomy: TSV rows "child<TAB>parent", optional "#root<TAB>id" directive,
// other lines starting with '#' are comments.
TaxonomyTree parse_taxonomy(std::istream& in);
std::string serialize_taxonomy(const TaxonomyTree& tree);

// Embeddings: TSV rows "key<TAB>v1,v2,...".
EmbeddingTable parse_embeddings(std::istream& in);

// JSON artifacts.

std::string policy_to_json(const AugPolicy& policy, const RunManifest* manifest = nullptr);
AugPolicy parse_policy(std::string_view text);

/// Per-run counts plus derived curves and deltas.
std::string metrics_to_json(const EvaluationTable& table, const RunManifest* manifest = nullptr);
/// Rebuilds the per-run counts of a metrics document.
EvaluationTable parse_metrics(std::string_view text);

std::string confusions_to_json(const ConfusionCurves& curves, double min_delta_cr,
                               const RunManifest* manifest = nullptr);

std::string confusion_report_to_json(const ConfusionReport& report, const RunManifest* manifest = nullptr);

std::string sim_config_to_json(const SimConfig& config);
SimConfig parse_sim_config(std::string_view text);

std::string intervention_to_json(const InterventionResult& result, const RunManifest* manifest = nullptr);

}  // namespace augbias

#endif  // AUGBIAS_IO_HPP_
