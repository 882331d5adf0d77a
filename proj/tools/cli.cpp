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


#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "augbias/io.hpp"
#include "augbias/metrics.hpp"
#include "augbias/policy.hpp"
#include "augbias/report.hpp"
#include "augbias/simharness.hpp"
#include "augbias/taxonomy.hpp"

namespace augbias::cli {

namespace fs = std::filesystem;

namespace {

struct Context {
  std::ostream& out;
  std::string command;
};

void emit(Context& ctx, const std::string& output, const std::string& text) {
  if (output.empty() || output == "-") {
    ctx.out << text;
  } else {
    write_file(output, text);
  }
}

std::optional<fs::path> opt_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return fs::path(s);
}

std::vector<fs::path> present(std::initializer_list<std::string> paths) {
  std::vector<fs::path> out;
  for (const auto& p : paths) {
    if (!p.empty()) out.emplace_back(p);
  }
  return out;
}

AffectedMode parse_affected_mode(const std::string& s) {
  if (s == "either") return AffectedMode::either;
  return parse_label_mode(s) == LabelMode::original ? AffectedMode::original : AffectedMode::multilabel;
}

SimConfig load_sim_config(const std::string& path, std::string& text) {
  if (path.empty()) {
    const auto c = SimConfig::canonical();
    text = sim_config_to_json(c);
    return c;
  }
  text = read_file(path);
  return parse_sim_config(text);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Class-level data augmentation bias toolkit", "augbias"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(toolkit_version()));

  std::string output;
  bool lax = false;

  // evaluate
  std::string log_path;
  std::string labels_path;
  std::string multilabels_path;
  std::string counts_path;
  auto* evaluate = app.add_subcommand("evaluate", "Prediction log and annotations to per-class metrics JSON");
  evaluate->add_option("--log", log_path, "Prediction log (JSON Lines)")->required();
  evaluate->add_option("--labels", labels_path, "Original labels (JSON Lines)")->required();
  evaluate->add_option("--multilabels", multilabels_path, "Multilabel sets (JSON Lines)");
  evaluate->add_option("--counts", counts_path, "Training counts (TSV)");
  evaluate->add_flag("--lax", lax, "Ignore unknown JSON fields");
  evaluate->add_option("-o,--output", output, "Output file (default stdout)");

  // confusions
  std::string metrics_path;
  double min_delta_cr = 0.025;
  auto* confusions = app.add_subcommand("confusions", "Metrics to growing confusion pairs");
  confusions->add_option("--metrics", metrics_path, "Metrics JSON")->required();
  confusions->add_option("--min-delta-cr", min_delta_cr, "Minimum confusion-rate growth")->capture_default_str();
  confusions->add_option("-o,--output", output, "Output file (default stdout)");

  // categorize
  std::string taxonomy_path;
  std::string embeddings_path;
  std::string exclude_subtree;
  std::string affected_mode = "original";
  std::size_t top = 50;
  std::optional<double> min_drop;
  CategoryThresholds thresholds;
  auto* categorize = app.add_subcommand("categorize", "Categorize confused pairs of affected classes");
  categorize->add_option("--metrics", metrics_path, "Metrics JSON")->required();
  categorize->add_option("--labels", labels_path, "Original labels (JSON Lines)")->required();
  categorize->add_option("--multilabels", multilabels_path, "Multilabel sets (JSON Lines)")->required();
  categorize->add_option("--taxonomy", taxonomy_path, "Taxonomy (TSV child<TAB>parent)");
  categorize->add_option("--embeddings", embeddings_path, "Word or class embeddings (TSV)");
  categorize->add_option("--t-overlap", thresholds.overlap, "C_kl threshold")->capture_default_str();
  categorize->add_option("--t-iou", thresholds.iou, "IoU threshold")->capture_default_str();
  categorize->add_option("--t-wordnet", thresholds.wordnet, "Wu-Palmer threshold")->capture_default_str();
  categorize->add_option("--t-embedding", thresholds.embedding, "Embedding cosine threshold")->capture_default_str();
  categorize->add_option("--exclude-subtree", exclude_subtree, "Drop affected classes under this taxonomy node");
  categorize->add_option("--top", top, "Number of affected classes")->capture_default_str();
  categorize->add_option("--min-drop", min_drop, "Select classes whose drop is at least this (fraction)");
  categorize->add_option("--mode", affected_mode, "original, real or either")->capture_default_str();
  categorize->add_option("--min-delta-cr", min_delta_cr, "Minimum confusion-rate growth")->capture_default_str();
  categorize->add_flag("--lax", lax, "Ignore unknown JSON fields");
  categorize->add_option("-o,--output", output, "Output file (default stdout)");

  // policy
  std::size_t m = 50;
  std::string mode = "original";
  std::string baseline;
  auto* policy = app.add_subcommand("policy", "Metrics to a class-conditional augmentation policy");
  policy->add_option("--metrics", metrics_path, "Metrics JSON")->required();
  policy->add_option("--m", m, "Number of classes with their own strength")->capture_default_str();
  policy->add_option("--mode", mode, "original or real")->capture_default_str();
  policy->add_option("--baseline", baseline, "Build a baseline instead")->check(CLI::IsMember({"remove"}));
  policy->add_option("--top", top, "Affected classes for the baseline")->capture_default_str();
  policy->add_option("-o,--output", output, "Output file (default stdout)");

  // simulate
  std::string config_path;
  std::string out_dir;
  bool print_config = false;
  auto* simulate = app.add_subcommand("simulate", "Run the simulator sweep and write logs and annotations");
  simulate->add_option("--config", config_path, "Simulator config JSON (default: canonical scenario)");
  simulate->add_option("--out", out_dir, "Output directory");
  simulate->add_flag("--print-config", print_config, "Print the effective config and exit");

  // intervene
  std::vector<std::string> policy_paths;
  std::vector<std::string> affected;
  std::size_t affected_top = 1;
  auto* intervene = app.add_subcommand("intervene", "Compare augmentation policies on the simulator");
  intervene->add_option("--config", config_path, "Simulator config JSON (default: canonical scenario)");
  intervene->add_option("--policy", policy_paths, "Policy JSON files to compare against uniform strongest");
  intervene->add_option("--affected", affected, "Affected classes for the group averages");
  intervene->add_option("--m", m, "m for the derived policy (without --policy)")->default_val(1);
  intervene->add_option("--mode", mode, "original or real")->capture_default_str();
  intervene->add_option("--top", affected_top, "Affected classes (without --policy)")->capture_default_str();
  intervene->add_option("-o,--output", output, "Output file (default stdout)");

  // report
  std::string input_path;
  auto* report = app.add_subcommand("report", "Render any JSON artifact as markdown");
  report->add_option("input", input_path, "Artifact JSON")->required();
  report->add_option("-o,--output", output, "Output file (default stdout)");

  std::ostringstream joined;
  joined << "augbias";
  for (const auto& a : args) joined << ' ' << a;
  Context ctx{out, joined.str()};

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream cli_out;
    const int code = app.exit(e, cli_out, err);
    out << cli_out.str();
    return code == 0 ? kOk : kValidation;
  }

  const ParseOptions options{lax};
  try {
    if (*evaluate) {
      const auto log = read_prediction_log(log_path, options);
      const auto ann = read_annotations(labels_path, opt_path(multilabels_path), opt_path(counts_path), options);
      const auto manifest = make_manifest(ctx.command, present({log_path, labels_path, multilabels_path, counts_path}));
      emit(ctx, output, metrics_to_json(tabulate(log, ann), &manifest));
    } else if (*confusions) {
      const auto table = parse_metrics(read_file(metrics_path));
      const auto manifest = make_manifest(ctx.command, present({metrics_path}));
      emit(ctx, output, confusions_to_json(confusion_curves(table), min_delta_cr, &manifest));
    } else if (*categorize) {
      const auto table = parse_metrics(read_file(metrics_path));
      const auto ann = read_annotations(labels_path, opt_path(multilabels_path), std::nullopt, options);
      std::optional<TaxonomyTree> tree;
      std::optional<EmbeddingTable> table_emb;
      if (!taxonomy_path.empty()) {
        std::ifstream in(taxonomy_path);
        if (!in) throw ValidationError("cannot open '" + taxonomy_path + "'");
        tree = parse_taxonomy(in);
      }
      if (!embeddings_path.empty()) {
        std::ifstream in(embeddings_path);
        if (!in) throw ValidationError("cannot open '" + embeddings_path + "'");
        table_emb = parse_embeddings(in);
      }
      if (!tree && !table_emb) throw ValidationError("categorize needs --taxonomy, --embeddings or both");
      ReportConfig config;
      config.selector = min_drop ? AffectedSelector{MinDrop{*min_drop}} : AffectedSelector{TopN{top}};
      config.mode = parse_affected_mode(affected_mode);
      config.min_delta_cr = min_delta_cr;
      if (!exclude_subtree.empty()) config.exclude_subtree = exclude_subtree;
      config.thresholds = thresholds;
      const auto rep = confusion_report(confusion_curves(table), metric_curves(table), ann, tree ? &*tree : nullptr,
                                        table_emb ? &*table_emb : nullptr, config);
      const auto manifest = make_manifest(
          ctx.command, present({metrics_path, labels_path, multilabels_path, taxonomy_path, embeddings_path}));
      emit(ctx, output, confusion_report_to_json(rep, &manifest));
    } else if (*policy) {
      const auto curves = metric_curves(parse_metrics(read_file(metrics_path)));
      const auto label_mode = parse_label_mode(mode);
      if (curves.grid.empty()) throw ValidationError("metrics contain no runs");
      const auto result = baseline.empty()
                              ? build_policy(curves, m, label_mode)
                              : baseline_remove_augmentation(affected_classes(curves, TopN{top}, label_mode),
                                                             curves.grid.front());
      const auto manifest = make_manifest(ctx.command, present({metrics_path}));
      emit(ctx, output, policy_to_json(result, &manifest));
    } else if (*simulate) {
      std::string config_text;
      const auto config = load_sim_config(config_path, config_text);
      if (print_config) {
        ctx.out << sim_config_to_json(config);
        return kOk;
      }
      if (out_dir.empty()) throw ValidationError("simulate needs --out (or --print-config)");
      const auto result = sweep(config);
      const auto manifest = make_manifest(ctx.command, present({config_path}), sim_config_to_json(config));
      const fs::path dir(out_dir);
      write_file(dir / "predictions.jsonl", serialize_prediction_log(result.log, &manifest));
      write_file(dir / "labels.jsonl", serialize_original_labels(result.annotations.original));
      write_file(dir / "multilabels.jsonl", serialize_multilabels(*result.annotations.multilabel));
      write_file(dir / "train_counts.tsv", serialize_train_counts(*result.annotations.train_counts));
      write_file(dir / "sim_config.json", sim_config_to_json(config));
    } else if (*intervene) {
      std::string config_text;
      const auto config = load_sim_config(config_path, config_text);
      InterventionResult result;
      if (policy_paths.empty()) {
        if (!affected.empty()) throw ValidationError("--affected needs at least one --policy");
        result = intervention_experiment(config, {affected_top, m, parse_label_mode(mode)});
      } else {
        const Strength strongest = *std::min_element(config.grid.begin(), config.grid.end());
        std::vector<std::pair<std::string, AugPolicy>> policies{{"uniform", uniform_policy(strongest)}};
        for (const auto& p : policy_paths) policies.emplace_back(fs::path(p).stem().string(), parse_policy(read_file(p)));
        result = evaluate_policies(config, policies, affected);
      }
      auto inputs = present({config_path});
      for (const auto& p : policy_paths) inputs.emplace_back(p);
      const auto manifest = make_manifest(ctx.command, inputs, sim_config_to_json(config));
      emit(ctx, output, intervention_to_json(result, &manifest));
    } else if (*report) {
      emit(ctx, output, render_markdown(read_file(input_path)));
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kOk;
}

}  // namespace augbias::cli
