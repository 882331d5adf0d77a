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


#include "augbias/taxonomy.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace augbias {

TaxonomyTree TaxonomyTree::from_edges(const std::vector<std::pair<std::string, std::string>>& child_parent,
                                      std::optional<std::string> root) {
  std::map<std::string, std::string> parent_of;
  std::set<std::string> names;
  for (const auto& [child, parent] : child_parent) {
    if (child.empty() || parent.empty()) throw ValidationError("taxonomy edge with an empty node id");
    if (child == parent) throw ValidationError("taxonomy node '" + child + "' is its own parent");
    auto [it, inserted] = parent_of.emplace(child, parent);
    if (!inserted && it->second != parent) {
      throw ValidationError("taxonomy node '" + child + "' has two parents ('" + it->second + "', '" +
                            parent + "')");
    }
    names.insert(child);
    names.insert(parent);
  }
  if (root) names.insert(*root);

  std::vector<std::string> parentless;
  for (const auto& n : names) {
    if (!parent_of.contains(n)) parentless.push_back(n);
  }

  std::string root_id;
  if (root) {
    if (parent_of.contains(*root)) throw ValidationError("declared root '" + *root + "' has a parent");
    for (const auto& n : parentless) {
      if (n != *root) throw ValidationError("taxonomy node '" + n + "' does not reach the root");
    }
    root_id = *root;
  } else if (parentless.size() == 1) {
    root_id = parentless.front();
  } else if (parentless.empty()) {
    throw ValidationError("taxonomy has no root (every node has a parent, so it contains a cycle)");
  } else {
    root_id = std::string(kVirtualRoot);
    if (names.contains(root_id)) throw ValidationError("node id collides with the virtual root");
    names.insert(root_id);
    for (const auto& n : parentless) parent_of.emplace(n, root_id);
  }

  TaxonomyTree tree;
  for (const auto& n : names) {
    tree.index_.emplace(n, tree.nodes_.size());
    tree.nodes_.push_back(Node{n, 0, 0, {}});
  }
  tree.root_ = tree.index_.at(root_id);
  tree.nodes_[tree.root_].parent = tree.root_;
  for (const auto& [child, parent] : parent_of) {
    const auto c = tree.index_.at(child);
    const auto p = tree.index_.at(parent);
    tree.nodes_[c].parent = p;
    tree.nodes_[p].children.push_back(c);
  }

  std::deque<std::size_t> queue{tree.root_};
  tree.nodes_[tree.root_].depth = 1;
  std::size_t reached = 0;
  while (!queue.empty()) {
    const auto i = queue.front();
    queue.pop_front();
    ++reached;
    for (auto c : tree.nodes_[i].children) {
      tree.nodes_[c].depth = tree.nodes_[i].depth + 1;
      queue.push_back(c);
    }
  }
  if (reached != tree.nodes_.size()) {
    for (const auto& n : tree.nodes_) {
      if (n.depth == 0) throw ValidationError("taxonomy cycle through node '" + n.id + "'");
    }
  }
  return tree;
}

std::size_t TaxonomyTree::require(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw ValidationError("taxonomy has no node '" + id + "'");
  return it->second;
}

int TaxonomyTree::depth(const std::string& id) const { return nodes_[require(id)].depth; }

std::optional<std::string> TaxonomyTree::parent(const std::string& id) const {
  const auto i = require(id);
  if (i == root_) return std::nullopt;
  return nodes_[nodes_[i].parent].id;
}

std::vector<std::string> TaxonomyTree::children(const std::string& id) const {
  std::vector<std::string> out;
  for (auto c : nodes_[require(id)].children) out.push_back(nodes_[c].id);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> TaxonomyTree::nodes() const {
  std::vector<std::string> out;
  for (const auto& [id, i] : index_) out.push_back(id);
  return out;
}

std::string TaxonomyTree::lowest_common_subsumer(const std::string& a, const std::string& b) const {
  auto x = require(a);
  auto y = require(b);
  while (nodes_[x].depth > nodes_[y].depth) x = nodes_[x].parent;
  while (nodes_[y].depth > nodes_[x].depth) y = nodes_[y].parent;
  while (x != y) {
    x = nodes_[x].parent;
    y = nodes_[y].parent;
  }
  return nodes_[x].id;
}

double wu_palmer(const TaxonomyTree& tree, const std::string& a, const std::string& b) {
  const int da = tree.depth(a);
  const int db = tree.depth(b);
  const int dl = tree.depth(tree.lowest_common_subsumer(a, b));
  return 2.0 * dl / static_cast<double>(da + db);
}

std::set<std::string> subtree_members(const TaxonomyTree& tree, const std::string& root_node) {
  std::set<std::string> out;
  std::vector<std::string> stack{root_node};
  if (!tree.contains(root_node)) throw ValidationError("taxonomy has no node '" + root_node + "'");
  while (!stack.empty()) {
    auto n = std::move(stack.back());
    stack.pop_back();
    for (auto& c : tree.children(n)) stack.push_back(std::move(c));
    out.insert(std::move(n));
  }
  return out;
}

// ---------------------------------------------------------------------------

void EmbeddingTable::add(std::string key, std::vector<double> vector) {
  if (vector.empty()) throw ValidationError("embedding for '" + key + "' is empty");
  if (dim_ == 0) dim_ = vector.size();
  if (vector.size() != dim_) {
    throw ValidationError("embedding for '" + key + "' has dimension " + std::to_string(vector.size()) +
                          ", expected " + std::to_string(dim_));
  }
  vectors_[std::move(key)] = std::move(vector);
}

const std::vector<double>* EmbeddingTable::find(const std::string& key) const {
  auto it = vectors_.find(key);
  return it == vectors_.end() ? nullptr : &it->second;
}

std::optional<std::vector<double>> EmbeddingTable::class_vector(const ClassId& cls) const {
  if (const auto* v = find(cls)) return *v;

  std::vector<double> sum(dim_, 0.0);
  std::size_t known = 0;
  std::string word;
  auto flush = [&] {
    if (word.empty()) return;
    if (const auto* v = find(word)) {
      for (std::size_t i = 0; i < dim_; ++i) sum[i] += (*v)[i];
      ++known;
    }
    word.clear();
  };
  for (char ch : cls) {
    if (ch == ' ' || ch == '_' || ch == ',' || ch == '-') {
      flush();
    } else {
      word.push_back(ch);
    }
  }
  flush();
  if (known == 0) return std::nullopt;
  for (auto& x : sum) x /= static_cast<double>(known);
  return sum;
}

std::optional<double> embed_similarity(const EmbeddingTable& table, const ClassId& k, const ClassId& l) {
  const auto vk = table.class_vector(k);
  const auto vl = table.class_vector(l);
  if (!vk || !vl) return std::nullopt;
  double dot = 0.0;
  double nk = 0.0;
  double nl = 0.0;
  for (std::size_t i = 0; i < vk->size(); ++i) {
    dot += (*vk)[i] * (*vl)[i];
    nk += (*vk)[i] * (*vk)[i];
    nl += (*vl)[i] * (*vl)[i];
  }
  if (nk == 0.0) throw ValidationError("zero embedding vector for '" + k + "'");
  if (nl == 0.0) throw ValidationError("zero embedding vector for '" + l + "'");
  return std::clamp(dot / (std::sqrt(nk) * std::sqrt(nl)), -1.0, 1.0);
}

namespace {

struct LabelOverlap {
  std::int64_t with_k = 0;
  std::int64_t with_l = 0;
  std::int64_t both = 0;
  std::int64_t either = 0;
};

LabelOverlap count_overlap(const AnnotationSet& ann, const ClassId& k, const ClassId& l) {
  if (!ann.multilabel) throw ValidationError("label overlap requires multilabel annotations");
  LabelOverlap o;
  for (const auto& [sample, labels] : *ann.multilabel) {
    const bool hk = labels.contains(k);
    const bool hl = labels.contains(l);
    o.with_k += hk;
    o.with_l += hl;
    o.both += hk && hl;
    o.either += hk || hl;
  }
  return o;
}

}  // namespace

std::optional<double> co_occurrence(const AnnotationSet& ann, const ClassId& k, const ClassId& l) {
  const auto o = count_overlap(ann, k, l);
  if (o.with_k == 0) return std::nullopt;
  return static_cast<double>(o.both) / static_cast<double>(o.with_k);
}

std::optional<double> label_iou(const AnnotationSet& ann, const ClassId& k, const ClassId& l) {
  const auto o = count_overlap(ann, k, l);
  if (o.either == 0) return std::nullopt;
  return static_cast<double>(o.both) / static_cast<double>(o.either);
}

std::string_view to_string(ConfusionCategory c) {
  switch (c) {
    case ConfusionCategory::ambiguous:
      return "ambiguous";
    case ConfusionCategory::co_occurring:
      return "co_occurring";
    case ConfusionCategory::fine_grained:
      return "fine_grained";
    case ConfusionCategory::unrelated:
      return "unrelated";
  }
  return "unrelated";
}

ConfusionCategory parse_category(std::string_view text) {
  for (auto c : kAllCategories) {
    if (to_string(c) == text) return c;
  }
  throw ValidationError("unknown confusion category '" + std::string(text) + "'");
}

ConfusionCategory categorize_pair(const PairScores& s, const CategoryThresholds& t) {
  if (!s.c_kl && !s.iou) throw ValidationError("cannot categorize a pair without an overlap score");
  if (!s.wn_sim && !s.embed_sim) {
    throw ValidationError("cannot categorize a pair without a semantic similarity score");
  }
  const bool overlap = (s.c_kl && *s.c_kl >= t.overlap) || (s.iou && *s.iou >= t.iou);
  const bool similar = (s.wn_sim && *s.wn_sim >= t.wordnet) || (s.embed_sim && *s.embed_sim >= t.embedding);
  if (overlap) return similar ? ConfusionCategory::ambiguous : ConfusionCategory::co_occurring;
  return similar ? ConfusionCategory::fine_grained : ConfusionCategory::unrelated;
}

PairScores pair_scores(const AnnotationSet& ann, const TaxonomyTree* tree, const EmbeddingTable* table,
                       const ClassId& k, const ClassId& l) {
  PairScores s;
  if (ann.multilabel) {
    const auto o = count_overlap(ann, k, l);
    if (o.with_k > 0) s.c_kl = static_cast<double>(o.both) / static_cast<double>(o.with_k);
    if (o.with_l > 0) s.c_lk = static_cast<double>(o.both) / static_cast<double>(o.with_l);
    if (o.either > 0) s.iou = static_cast<double>(o.both) / static_cast<double>(o.either);
  }
  if (tree) s.wn_sim = wu_palmer(*tree, k, l);
  if (table) s.embed_sim = embed_similarity(*table, k, l);
  return s;
}

// ---------------------------------------------------------------------------

std::size_t ConfusionReport::total_pairs() const {
  std::size_t n = 0;
  for (const auto& [c, count] : category_counts) n += count;
  return n;
}

double ConfusionReport::category_fraction(ConfusionCategory c) const {
  const auto total = total_pairs();
  if (total == 0) return 0.0;
  auto it = category_counts.find(c);
  return it == category_counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(total);
}

ConfusionReport confusion_report(const ConfusionCurves& conf, const MetricCurves& metrics,
                                 const AnnotationSet& ann, const TaxonomyTree* tree,
                                 const EmbeddingTable* table, const ReportConfig& config) {
  if (conf.classes != metrics.classes) {
    throw ValidationError("confusion and metric curves are over different class universes");
  }

  std::vector<ClassId> affected;
  auto merge = [&](LabelMode mode) {
    for (auto& c : affected_classes(metrics, config.selector, mode)) {
      if (std::find(affected.begin(), affected.end(), c) == affected.end()) affected.push_back(std::move(c));
    }
  };
  if (config.mode != AffectedMode::multilabel) merge(LabelMode::original);
  if (config.mode != AffectedMode::original) {
    if (!metrics.has_multilabel) throw ValidationError("multilabel affected classes need multilabel metrics");
    merge(LabelMode::multilabel);
  }

  if (config.exclude_subtree) {
    if (!tree) throw ValidationError("--exclude-subtree needs a taxonomy");
    const auto excluded = subtree_members(*tree, *config.exclude_subtree);
    std::erase_if(affected, [&](const ClassId& c) { return excluded.contains(c); });
  }

  const auto drops = accuracy_drop(metrics);
  ConfusionReport report;
  report.config = config;
  for (auto c : kAllCategories) report.category_counts[c] = 0;

  for (const auto& cls : affected) {
    AffectedEntry entry;
    entry.cls = cls;
    entry.delta_acc_original = drops.at(cls).original;
    entry.delta_acc_real = drops.at(cls).real;

    const auto k = conf.class_index(cls);
    std::vector<std::pair<double, std::size_t>> partners;
    for (std::size_t l = 0; l < conf.classes.size(); ++l) {
      if (l == k) continue;
      const double d = conf.delta(k, l);
      if (d >= config.min_delta_cr && d > 0.0) partners.emplace_back(d, l);
    }
    std::sort(partners.begin(), partners.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });

    for (const auto& [d, l] : partners) {
      ConfusedPartner p;
      p.cls = conf.classes[l];
      p.delta_cr = d;
      p.delta_cr_star = conf.delta_reverse(l, k);
      p.scores = pair_scores(ann, tree, table, cls, p.cls);
      p.category = categorize_pair(p.scores, config.thresholds);
      ++report.category_counts[p.category];
      entry.partners.push_back(std::move(p));
    }
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace augbias
