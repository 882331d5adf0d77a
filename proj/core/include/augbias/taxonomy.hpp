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


#ifndef AUGBIAS_TAXONOMY_HPP_
#define AUGBIAS_TAXONOMY_HPP_

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "augbias/common.hpp"
#include "augbias/metrics.hpp"

namespace augbias {

/// Rooted tree over class / synset ids. The root has depth 1. Immutable
/// after construction.
class TaxonomyTree {
 public:
  /// Name given to the synthetic root when the edges describe a forest.
  static constexpr std::string_view kVirtualRoot = "<root>";

  /// Builds the tree from child -> parent edges. If root is not given, the
  /// single parentless node becomes the root; several parentless nodes are
  /// attached to kVirtualRoot. Throws ValidationError on cycles, nodes with
  /// two parents, or nodes that cannot reach the root.
  static TaxonomyTree from_edges(const std::vector<std::pair<std::string, std::string>>& child_parent,
                                 std::optional<std::string> root = std::nullopt);

  const std::string& root() const { return nodes_[root_].id; }
  bool contains(const std::string& id) const { return index_.contains(id); }
  std::size_t size() const { return nodes_.size(); }

  int depth(const std::string& id) const;
  std::optional<std::string> parent(const std::string& id) const;
  std::vector<std::string> children(const std::string& id) const;
  std::vector<std::string> nodes() const;

  /// Deepest common ancestor (a node is its own ancestor).
  std::string lowest_common_subsumer(const std::string& a, const std::string& b) const;

 private:
  struct Node {
    std::string id;
    std::size_t parent;  // == own index for the root
    int depth;
    std::vector<std::size_t> children;
  };
  std::size_t require(const std::string& id) const;

  std::vector<Node> nodes_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::size_t root_ = 0;
};

/// 2 * depth(lcs) / (depth(a) + depth(b)).
double wu_palmer(const TaxonomyTree& tree, const std::string& a, const std::string& b);

/// root_node and all of its descendants.
std::set<std::string> subtree_members(const TaxonomyTree& tree, const std::string& root_node);

/// Word or class vectors of one fixed dimension.
class EmbeddingTable {
 public:
  void add(std::string key, std::vector<double> vector);

  std::size_t dimension() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }
  const std::vector<double>* find(const std::string& key) const;

  /// Vector of a class: an exact entry if present, otherwise the mean of
  /// the vectors of its words (split on spaces, underscores, commas and
  /// hyphens). Unknown words are skipped; nullopt if no word is known.
  std::optional<std::vector<double>> class_vector(const ClassId& cls) const;

 private:
  std::size_t dim_ = 0;
  std::map<std::string, std::vector<double>> vectors_;
};

/// Cosine similarity of two class embeddings; nullopt if either class is
/// out of vocabulary. Throws ValidationError on a zero vector.
std::optional<double> embed_similarity(const EmbeddingTable& table, const ClassId& k, const ClassId& l);

/// C_kl: among samples labelled k, the fraction also labelled l.
std::optional<double> co_occurrence(const AnnotationSet& ann, const ClassId& k, const ClassId& l);

/// |samples with both| / |samples with either|, over multilabel sets.
std::optional<double> label_iou(const AnnotationSet& ann, const ClassId& k, const ClassId& l);

enum class ConfusionCategory { ambiguous, co_occurring, fine_grained, unrelated };

inline constexpr std::array<ConfusionCategory, 4> kAllCategories = {
    ConfusionCategory::ambiguous, ConfusionCategory::co_occurring, ConfusionCategory::fine_grained,
    ConfusionCategory::unrelated};

std::string_view to_string(ConfusionCategory c);
ConfusionCategory parse_category(std::string_view text);

struct PairScores {
  std::optional<double> c_kl;
  std::optional<double> c_lk;
  std::optional<double> iou;
  std::optional<double> wn_sim;
  std::optional<double> embed_sim;
};

struct CategoryThresholds {
  double overlap = 0.3;     // on C_kl
  double iou = 0.15;
  double wordnet = 0.8;
  double embedding = 0.4;
};

/// Overlap is high if C_kl or IoU clears its threshold, semantic similarity
/// is high if either similarity clears its threshold. Absent scores count as
/// low; an input with no overlap score or no similarity score is rejected.
ConfusionCategory categorize_pair(const PairScores& scores, const CategoryThresholds& thresholds = {});

PairScores pair_scores(const AnnotationSet& ann, const TaxonomyTree* tree, const EmbeddingTable* table,
                       const ClassId& k, const ClassId& l);

enum class AffectedMode { original, multilabel, either };

struct ReportConfig {
  AffectedSelector selector = TopN{50};
  AffectedMode mode = AffectedMode::original;
  double min_delta_cr = 0.025;
  std::optional<std::string> exclude_subtree;
  CategoryThresholds thresholds;
};

struct ConfusedPartner {
  ClassId cls;
  double delta_cr = 0.0;       // growth of k -> l at the strongest setting
  double delta_cr_star = 0.0;  // reverse confusion l -> k at weaker settings
  PairScores scores;
  ConfusionCategory category = ConfusionCategory::unrelated;
};

struct AffectedEntry {
  ClassId cls;
  std::optional<double> delta_acc_original;
  std::optional<double> delta_acc_real;
  std::vector<ConfusedPartner> partners;
};

struct ConfusionReport {
  ReportConfig config;
  std::vector<AffectedEntry> entries;
  std::map<ConfusionCategory, std::size_t> category_counts;

  std::size_t total_pairs() const;
  double category_fraction(ConfusionCategory c) const;
};

/// For every affected class, lists partners whose confusion rate grew by at
/// least config.min_delta_cr and categorizes each pair.
ConfusionReport confusion_report(const ConfusionCurves& conf, const MetricCurves& metrics,
                                 const AnnotationSet& ann, const TaxonomyTree* tree,
                                 const EmbeddingTable* table, const ReportConfig& config);

}  // namespace augbias

#endif  // AUGBIAS_TAXONOMY_HPP_
