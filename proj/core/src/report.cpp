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


#include "augbias/report.hpp"

#include <json.hpp>

#include <cstdio>
#include <sstream>

#include "augbias/common.hpp"

namespace augbias {

using json = nlohmann::ordered_json;

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string num(const json& v, int digits = 3) { return v.is_number() ? fixed(v.get<double>(), digits) : "n/a"; }

std::string pct(const json& v) { return v.is_number() ? fixed(100.0 * v.get<double>(), 2) : "n/a"; }

std::string pct_se(const json& v) {
  if (!v.is_object()) return "n/a";
  return fixed(100.0 * v["mean"].get<double>(), 2) + " ± " + fixed(100.0 * v["se"].get<double>(), 2);
}

std::string plain_se(const json& v) {
  if (!v.is_object()) return "n/a";
  return fixed(v["mean"].get<double>(), 2) + " ± " + fixed(v["se"].get<double>(), 2);
}

std::string strength(const json& v) {
  if (v.is_null()) return "none";
  std::ostringstream out;
  out << v.get<double>();
  return out.str() + "%";
}

void manifest(std::ostringstream& out, const json& j) {
  if (!j.contains("manifest")) return;
  const auto& m = j["manifest"];
  out << "\n---\n\n";
  out << "- toolkit version: " << m.value("version", "") << "\n";
  out << "- config hash: `" << m.value("config_hash", "") << "`\n";
  out << "- command: `" << m.value("command", "") << "`\n";
  for (const auto& in : m["inputs"]) {
    out << "- input `" << in["path"].get<std::string>() << "`: `" << in["digest"].get<std::string>() << "`\n";
  }
}

void render_metrics(std::ostringstream& out, const json& j) {
  out << "# Per-class metrics\n\n";
  const auto& grid = j["grid"];
  const bool real = j.value("has_multilabel", false);
  out << "Strength grid: ";
  for (std::size_t g = 0; g < grid.size(); ++g) out << (g ? ", " : "") << strength(grid[g]);
  out << ". Runs: " << j["runs"].size() << ".\n\n";

  out << "| class |";
  for (const auto& s : grid) out << " acc@" << strength(s) << " |";
  out << " Δacc |" << (real ? " Δacc real |" : "") << " ΔFP |\n|---|";
  for (std::size_t g = 0; g < grid.size(); ++g) out << "---|";
  out << "---|" << (real ? "---|" : "") << "---|\n";

  const json none;
  for (const auto& [cls, c] : j["curves"].items()) {
    out << "| " << cls << " |";
    for (const auto& a : c["acc_original"]) out << " " << pct_se(a) << " |";
    const auto& drop = j.contains("accuracy_drop") ? j["accuracy_drop"][cls] : none;
    out << " " << (drop.is_object() ? pct(drop["original"]) : "n/a") << " |";
    if (real) out << " " << (drop.is_object() ? pct(drop["real"]) : "n/a") << " |";
    const bool has_growth = j.contains("fp_growth");
    out << " " << (has_growth ? num(j["fp_growth"]["original"][cls], 2) : "n/a") << " |\n";
  }
}

void render_confusions(std::ostringstream& out, const json& j) {
  out << "# Growing confusions\n\n";
  out << "Pairs with ΔCR ≥ " << pct(j["min_delta_cr"]) << "%: " << j["pairs"].size() << ".\n\n";
  if (j["pairs"].empty()) return;
  out << "| true | predicted | ΔCR | ΔCR* |\n|---|---|---|---|\n";
  for (const auto& p : j["pairs"]) {
    out << "| " << p["true"].get<std::string>() << " | " << p["predicted"].get<std::string>() << " | "
        << pct(p["delta_cr"]) << " | " << pct(p["delta_cr_star"]) << " |\n";
  }
}

void render_confusion_report(std::ostringstream& out, const json& j) {
  static constexpr std::pair<const char*, const char*> kSections[] = {
      {"ambiguous", "Ambiguous"},
      {"co_occurring", "Co-occurring"},
      {"fine_grained", "Fine-grained"},
      {"unrelated", "Semantically unrelated"},
  };
  out << "# Confusion report\n\n";
  out << "Affected classes: " << j["entries"].size() << ". Confused pairs: " << j["total_pairs"].get<std::size_t>()
      << ".\n\n";
  out << "| category | pairs | share |\n|---|---|---|\n";
  const double total = static_cast<double>(j["total_pairs"].get<std::size_t>());
  for (const auto& [key, title] : kSections) {
    const auto n = j["category_counts"][key].get<std::size_t>();
    out << "| " << title << " | " << n << " | " << (total > 0 ? fixed(100.0 * static_cast<double>(n) / total, 1) + "%" : "n/a")
        << " |\n";
  }
  for (const auto& [key, title] : kSections) {
    out << "\n## " << title << "\n\n";
    std::ostringstream rows;
    for (const auto& e : j["entries"]) {
      for (const auto& p : e["partners"]) {
        if (p["category"] != key) continue;
        rows << "| " << e["class"].get<std::string>() << " | " << p["class"].get<std::string>() << " | "
             << pct(p["delta_cr"]) << " | " << pct(p["delta_cr_star"]) << " | " << num(p["c_kl"]) << " | "
             << num(p["c_lk"]) << " | " << num(p["iou"]) << " | " << num(p["wn_sim"]) << " | "
             << num(p["embed_sim"]) << " |\n";
      }
    }
    if (rows.str().empty()) {
      out << "No pairs.\n";
    } else {
      out << "| class | confused with | ΔCR | ΔCR* | C_kl | C_lk | IoU | WordNet | embedding |\n"
             "|---|---|---|---|---|---|---|---|---|\n"
          << rows.str();
    }
  }
}

void render_policy(std::ostringstream& out, const json& j) {
  out << "# Augmentation policy\n\n";
  out << "Default strength: " << strength(j["default_strength"]) << ".\n";
  if (j.contains("provenance")) {
    const auto& p = j["provenance"];
    if (!p.value("kind", "").empty()) {
      out << "Built by `" << p["kind"].get<std::string>() << "` with m = " << p["m"] << ", " << p["metric"].get<std::string>()
          << " on " << p["mode"].get<std::string>() << " labels.\n";
    }
  }
  out << "\n";
  if (j["overrides"].empty()) {
    out << "No class overrides.\n";
    return;
  }
  out << "| class | strength |\n|---|---|\n";
  for (const auto& [cls, s] : j["overrides"].items()) out << "| " << cls << " | " << strength(s) << " |\n";
}

void render_intervention(std::ostringstream& out, const json& j) {
  out << "# Intervention comparison\n\n";
  const auto n_aff = j["affected"].size();
  out << "Affected classes:";
  for (const auto& c : j["affected"]) out << " " << c.get<std::string>();
  out << "\n\n| augmentation strategy | avg acc | avg acc of " << n_aff << " affected | avg acc of remaining |\n"
      << "|---|---|---|---|\n";
  for (const auto& r : j["rows"]) {
    out << "| " << r["name"].get<std::string>() << " | " << plain_se(r["overall"]) << " | " << plain_se(r["affected"])
        << " | " << plain_se(r["remaining"]) << " |\n";
  }
}

void render_sim_config(std::ostringstream& out, const json& j) {
  out << "# Simulator configuration\n\n";
  out << "Canvas " << j["canvas_length"] << " slots x " << j["block_dim"] << " dims, noise σ = " << num(j["noise_sigma"])
      << ", " << j["seeds"] << " seeds per strength.\n\n";
  out << "| class | blocks (block@slot) | train | val |\n|---|---|---|---|\n";
  for (const auto& c : j["classes"]) {
    out << "| " << c["name"].get<std::string>() << " |";
    for (const auto& p : c["composition"]) out << " " << p["block"] << "@" << p["slot"];
    out << " | " << c["train_count"] << " | " << c["val_count"] << " |\n";
  }
}

}  // namespace

std::string render_markdown(std::string_view artifact_json) {
  json j;
  try {
    j = json::parse(artifact_json);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("report input is not a JSON document: ") + e.what());
  }
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw ValidationError("report input has no 'kind' field");
  }
  const auto kind = j["kind"].get<std::string>();
  std::ostringstream out;
  try {
    if (kind == "metrics") {
      render_metrics(out, j);
    } else if (kind == "confusions") {
      render_confusions(out, j);
    } else if (kind == "confusion_report") {
      render_confusion_report(out, j);
    } else if (kind == "policy") {
      render_policy(out, j);
    } else if (kind == "intervention") {
      render_intervention(out, j);
    } else if (kind == "sim_config") {
      render_sim_config(out, j);
    } else {
      throw ValidationError("cannot render artifacts of kind '" + kind + "'");
    }
  } catch (const json::exception& e) {
    throw ValidationError("malformed '" + kind + "' artifact: " + e.what());
  }
  manifest(out, j);
  return out.str();
}

}  // namespace augbias
