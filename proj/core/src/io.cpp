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


#include "augbias/io.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#ifndef AUGBIAS_VERSION
#define AUGBIAS_VERSION "0.0.0"
#endif

namespace augbias {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail_line(std::size_t line, const std::string& msg) {
  throw ValidationError("line " + std::to_string(line) + ": " + msg);
}

json parse_json_line(const std::string& text, std::size_t line) {
  try {
    auto j = json::parse(text);
    if (!j.is_object()) fail_line(line, "expected a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    fail_line(line, std::string("malformed JSON (") + e.what() + ")");
  }
}

json parse_document(std::string_view text, std::string_view expected_kind) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("expected a JSON object");
  if (!expected_kind.empty() && j.contains("kind") && j["kind"] != expected_kind) {
    throw ValidationError("expected a '" + std::string(expected_kind) + "' document, got '" +
                          j["kind"].get<std::string>() + "'");
  }
  if (j.contains("format_version") && j["format_version"] != kFormatVersion) {
    throw ValidationError("unsupported format_version " + j["format_version"].dump());
  }
  return j;
}

bool is_header(const json& j) {
  return j.contains("format_version") && !j.contains("sample");
}

void check_header(const json& j, std::size_t line) {
  if (line != 1) fail_line(line, "format header is only allowed on the first line");
  if (!j["format_version"].is_number_integer() || j["format_version"] != kFormatVersion) {
    fail_line(line, "unsupported format_version " + j["format_version"].dump());
  }
}

void check_fields(const json& j, std::initializer_list<std::string_view> allowed, const ParseOptions& options,
                  std::size_t line) {
  for (const auto& field : allowed) {
    if (!j.contains(field)) fail_line(line, "missing field '" + std::string(field) + "'");
  }
  if (options.lax) return;
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const auto& field : allowed) known = known || key == field;
    if (!known) fail_line(line, "unknown field '" + key + "'");
  }
}

std::string string_field(const json& j, const char* key, std::size_t line) {
  const auto& v = j[key];
  if (!v.is_string()) fail_line(line, std::string("field '") + key + "' must be a string");
  auto s = v.get<std::string>();
  if (s.empty()) fail_line(line, std::string("field '") + key + "' is empty");
  return s;
}

template <typename Fn>
void for_each_line(std::istream& in, Fn&& fn) {
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;
    fn(text, line);
  }
}

std::string with_path(const std::filesystem::path& path, const std::string& msg) {
  return path.string() + ": " + msg;
}

template <typename Fn>
auto parse_file(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  try {
    return fn(in);
  } catch (const ValidationError& e) {
    throw ValidationError(with_path(path, e.what()));
  }
}

// Integral percentages are written without a fractional part.
json percent_json(Strength s) {
  const double p = s.percent();
  if (p == std::floor(p)) return static_cast<std::int64_t>(p);
  return p;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json mean_se_json(const std::optional<MeanSe>& v) {
  if (!v) return nullptr;
  return json{{"mean", v->mean}, {"se", v->se}};
}

json manifest_json(const RunManifest& m) {
  json inputs = json::array();
  for (const auto& [path, digest] : m.inputs) inputs.push_back({{"path", path}, {"digest", digest}});
  return {{"version", m.version},
          {"config_hash", m.config_hash},
          {"inputs", inputs},
          {"command", m.command},
          {"timestamp", m.timestamp}};
}

json artifact(std::string_view kind) {
  return {{"kind", kind}, {"format_version", kFormatVersion}};
}

std::string finish(json& j, const RunManifest* manifest) {
  if (manifest) j["manifest"] = manifest_json(*manifest);
  return j.dump(2) + "\n";
}

double number(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) throw ValidationError(std::string("field '") + key + "' must be a number");
  return j[key].get<double>();
}

std::string text(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) throw ValidationError(std::string("field '") + key + "' must be a string");
  return j[key].get<std::string>();
}

std::uint64_t unsigned_number(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<std::int64_t>() < 0) {
    throw ValidationError(std::string("field '") + key + "' must be a non-negative integer");
  }
  return j[key].get<std::uint64_t>();
}

}  // namespace

std::string_view toolkit_version() { return AUGBIAS_VERSION; }

// ---------------------------------------------------------------------------

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view data) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path.string() + "'");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw InternalError("write to '" + path.string() + "' failed");
}

RunManifest make_manifest(std::string command, const std::vector<std::filesystem::path>& inputs,
                          std::string_view config_text) {
  RunManifest m;
  m.version = std::string(toolkit_version());
  m.config_hash = fnv1a64_hex(config_text);
  for (const auto& p : inputs) m.inputs.emplace_back(p.string(), fnv1a64_hex(read_file(p)));
  m.command = std::move(command);

  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  std::tm utc{};
  gmtime_r(&t, &utc);
  std::ostringstream ts;
  ts << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
  m.timestamp = ts.str();
  return m;
}

// ---------------------------------------------------------------------------

PredictionLog parse_prediction_log(std::istream& in, const ParseOptions& options) {
  PredictionLog log;
  std::map<std::tuple<double, std::int64_t, std::string>, std::size_t> first_line;
  for_each_line(in, [&](const std::string& raw, std::size_t line) {
    const auto j = parse_json_line(raw, line);
    if (is_header(j)) return check_header(j, line);
    check_fields(j, {"run", "s", "seed", "sample", "pred"}, options, line);
    if (!j["s"].is_number()) fail_line(line, "field 's' must be a number");
    if (!j["seed"].is_number_integer()) fail_line(line, "field 'seed' must be an integer");

    PredictionRecord r{string_field(j, "run", line), Strength(100.0), j["seed"].get<std::int64_t>(),
                       string_field(j, "sample", line), string_field(j, "pred", line)};
    try {
      r.strength = Strength(j["s"].get<double>());
    } catch (const ValidationError& e) {
      fail_line(line, e.what());
    }
    auto [it, inserted] = first_line.emplace(std::tuple{r.strength.percent(), r.seed, r.sample_id}, line);
    if (!inserted) {
      fail_line(line, "duplicate prediction for (s=" + to_string(r.strength) + ", seed=" + std::to_string(r.seed) +
                          ", sample=" + r.sample_id + "), first seen on line " + std::to_string(it->second));
    }
    log.add(std::move(r));
  });
  return log;
}

PredictionLog read_prediction_log(const std::filesystem::path& path, const ParseOptions& options) {
  return parse_file(path, [&](std::istream& in) { return parse_prediction_log(in, options); });
}

std::string serialize_prediction_log(const PredictionLog& log, const RunManifest* manifest) {
  std::string out;
  json header{{"format_version", kFormatVersion}};
  if (manifest) header["manifest"] = manifest_json(*manifest);
  out += header.dump() + "\n";
  for (const auto& r : log.records()) {
    json j{{"run", r.run_id}, {"s", percent_json(r.strength)}, {"seed", r.seed}, {"sample", r.sample_id},
           {"pred", r.predicted}};
    out += j.dump() + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------

std::map<SampleId, ClassId> parse_original_labels(std::istream& in, const ParseOptions& options) {
  std::map<SampleId, ClassId> out;
  for_each_line(in, [&](const std::string& raw, std::size_t line) {
    const auto j = parse_json_line(raw, line);
    if (is_header(j)) return check_header(j, line);
    check_fields(j, {"sample", "label"}, options, line);
    auto sample = string_field(j, "sample", line);
    if (!out.emplace(sample, string_field(j, "label", line)).second) {
      fail_line(line, "duplicate sample '" + sample + "'");
    }
  });
  return out;
}

std::map<SampleId, std::set<ClassId>> parse_multilabels(std::istream& in, const ParseOptions& options) {
  std::map<SampleId, std::set<ClassId>> out;
  for_each_line(in, [&](const std::string& raw, std::size_t line) {
    const auto j = parse_json_line(raw, line);
    if (is_header(j)) return check_header(j, line);
    check_fields(j, {"sample", "labels"}, options, line);
    auto sample = string_field(j, "sample", line);
    if (!j["labels"].is_array()) fail_line(line, "field 'labels' must be an array");
    std::set<ClassId> labels;
    for (const auto& l : j["labels"]) {
      if (!l.is_string() || l.get<std::string>().empty()) fail_line(line, "labels must be non-empty strings");
      labels.insert(l.get<std::string>());
    }
    if (!out.emplace(sample, std::move(labels)).second) fail_line(line, "duplicate sample '" + sample + "'");
  });
  return out;
}

std::map<ClassId, std::int64_t> parse_train_counts(std::istream& in) {
  std::map<ClassId, std::int64_t> out;
  for_each_line(in, [&](const std::string& raw, std::size_t line) {
    if (raw.front() == '#') return;
    const auto tab = raw.find('\t');
    if (tab == std::string::npos || tab == 0) fail_line(line, "expected 'class<TAB>count'");
    const auto cls = raw.substr(0, tab);
    const auto value = raw.substr(tab + 1);
    std::int64_t count = 0;
    std::size_t used = 0;
    try {
      count = std::stoll(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size() || count < 0) fail_line(line, "invalid count '" + value + "'");
    if (!out.emplace(cls, count).second) fail_line(line, "duplicate class '" + cls + "'");
  });
  return out;
}

AnnotationSet read_annotations(const std::filesystem::path& original,
                               const std::optional<std::filesystem::path>& multilabel,
                               const std::optional<std::filesystem::path>& counts, const ParseOptions& options) {
  AnnotationSet ann;
  ann.original = parse_file(original, [&](std::istream& in) { return parse_original_labels(in, options); });
  if (multilabel) {
    ann.multilabel = parse_file(*multilabel, [&](std::istream& in) { return parse_multilabels(in, options); });
  }
  if (counts) ann.train_counts = parse_file(*counts, [](std::istream& in) { return parse_train_counts(in); });
  ann.validate();
  return ann;
}

std::string serialize_original_labels(const std::map<SampleId, ClassId>& labels) {
  std::string out = json{{"format_version", kFormatVersion}}.dump() + "\n";
  for (const auto& [sample, label] : labels) out += json{{"sample", sample}, {"label", label}}.dump() + "\n";
  return out;
}

std::string serialize_multilabels(const std::map<SampleId, std::set<ClassId>>& labels) {
  std::string out = json{{"format_version", kFormatVersion}}.dump() + "\n";
  for (const auto& [sample, set] : labels) {
    json arr = json::array();
    for (const auto& l : set) arr.push_back(l);
    out += json{{"sample", sample}, {"labels", arr}}.dump() + "\n";
  }
  return out;
}

std::string serialize_train_counts(const std::map<ClassId, std::int64_t>& counts) {
  std::string out;
  for (const auto& [cls, n] : counts) out += cls + "\t" + std::to_string(n) + "\n";
  return out;
}

// ---------------------------------------------------------------------------

TaxonomyTree parse_taxonomy(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> edges;
  std::optional<std::string> root;
  for_each_line(in, [&](const std::string& raw, std::size_t line) {
    const auto tab = raw.find('\t');
    if (raw.rfind("#root\t", 0) == 0) {
      if (root) fail_line(line, "root declared twice");
      root = raw.substr(tab + 1);
      if (root->empty()) fail_line(line, "empty root id");
      return;
    }
    if (raw.front() == '#') return;
    if (tab == std::string::npos || raw.find('\t', tab + 1) != std::string::npos) {
      fail_line(line, "expected 'child<TAB>parent'");
    }
    edges.emplace_back(raw.substr(0, tab), raw.substr(tab + 1));
  });
  return TaxonomyTree::from_edges(edges, root);
}

std::string serialize_taxonomy(const TaxonomyTree& tree) {
  std::string out;
  const bool virtual_root = tree.root() == TaxonomyTree::kVirtualRoot;
  if (!virtual_root) out += "#root\t" + tree.root() + "\n";
  for (const auto& n : tree.nodes()) {
    auto p = tree.parent(n);
    if (!p || *p == TaxonomyTree::kVirtualRoot) continue;
    out += n + "\t" + *p + "\n";
  }
  if (virtual_root) {
    // An isolated top-level node has no edge to carry it.
    for (const auto& n : tree.children(tree.root())) {
      if (tree.children(n).empty()) throw ValidationError("cannot serialize isolated taxonomy node '" + n + "'");
    }
  }
  return out;
}

EmbeddingTable parse_embeddings(std::istream& in) {
  EmbeddingTable table;
  for_each_line(in, [&](const std::string& raw, std::size_t line) {
    if (raw.front() == '#') return;
    const auto tab = raw.find('\t');
    if (tab == std::string::npos || tab == 0) fail_line(line, "expected 'key<TAB>v1,v2,...'");
    std::vector<double> v;
    std::stringstream ss(raw.substr(tab + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      std::size_t used = 0;
      double x = 0.0;
      try {
        x = std::stod(item, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != item.size() || !std::isfinite(x)) fail_line(line, "invalid component '" + item + "'");
      v.push_back(x);
    }
    try {
      table.add(raw.substr(0, tab), std::move(v));
    } catch (const ValidationError& e) {
      fail_line(line, e.what());
    }
  });
  return table;
}

// ---------------------------------------------------------------------------

std::string policy_to_json(const AugPolicy& policy, const RunManifest* manifest) {
  json j = artifact("policy");
  j["default_strength"] = percent_json(policy.default_strength);
  json overrides = json::object();
  for (const auto& [cls, s] : policy.overrides) overrides[cls] = s ? percent_json(*s) : json(nullptr);
  j["overrides"] = overrides;
  const auto& p = policy.provenance;
  j["provenance"] = {{"kind", p.kind}, {"m", p.m}, {"metric", p.metric}, {"mode", to_string(p.mode)},
                     {"selected", p.selected}};
  return finish(j, manifest);
}

AugPolicy parse_policy(std::string_view data) {
  const auto j = parse_document(data, "policy");
  AugPolicy policy;
  policy.default_strength = Strength(number(j, "default_strength"));
  if (!j.contains("overrides") || !j["overrides"].is_object()) throw ValidationError("field 'overrides' must be an object");
  for (const auto& [cls, v] : j["overrides"].items()) {
    if (v.is_null()) {
      policy.overrides[cls] = std::nullopt;
    } else if (v.is_number()) {
      policy.overrides[cls] = Strength(v.get<double>());
    } else if (v.is_string() && v.get<std::string>() == "no_augmentation") {
      policy.overrides[cls] = std::nullopt;
    } else {
      throw ValidationError("override for '" + cls + "' must be a number or null");
    }
  }
  if (j.contains("provenance")) {
    const auto& p = j["provenance"];
    if (!p.is_object()) throw ValidationError("field 'provenance' must be an object");
    if (p.contains("kind")) policy.provenance.kind = text(p, "kind");
    if (p.contains("m")) policy.provenance.m = unsigned_number(p, "m");
    if (p.contains("metric")) policy.provenance.metric = text(p, "metric");
    if (p.contains("mode")) policy.provenance.mode = parse_label_mode(text(p, "mode"));
    if (p.contains("selected")) {
      for (const auto& c : p["selected"]) {
        if (!c.is_string()) throw ValidationError("provenance.selected must list class ids");
        policy.provenance.selected.push_back(c.get<std::string>());
      }
    }
  }
  return policy;
}

// ---------------------------------------------------------------------------

namespace {

json counts_json(const ClassCounts& c) {
  return {{"support", c.support}, {"correct", c.correct}, {"support_real", c.support_real},
          {"correct_real", c.correct_real}, {"fp", c.fp}, {"fp_real", c.fp_real},
          {"fn", c.fn}, {"fn_real", c.fn_real}};
}

ClassCounts counts_from_json(const json& j) {
  auto get = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer()) throw ValidationError(std::string("count '") + key + "' missing");
    return j[key].get<std::int64_t>();
  };
  return {get("support"), get("correct"), get("support_real"), get("correct_real"),
          get("fp"),      get("fp_real"), get("fn"),           get("fn_real")};
}

json grid_json(const std::vector<Strength>& grid) {
  json g = json::array();
  for (auto s : grid) g.push_back(percent_json(s));
  return g;
}

}  // namespace

std::string metrics_to_json(const EvaluationTable& table, const RunManifest* manifest) {
  json j = artifact("metrics");
  j["classes"] = table.classes;
  j["grid"] = grid_json(table.grid());
  j["has_multilabel"] = table.has_multilabel;

  json runs = json::array();
  for (const auto& [key, run] : table.runs) {
    json counts = json::object();
    for (std::size_t k = 0; k < table.classes.size(); ++k) counts[table.classes[k]] = counts_json(run.classes[k]);
    json conf = json::array();
    for (const auto& [kl, n] : run.confusions) {
      conf.push_back({table.classes[kl.first], table.classes[kl.second], n});
    }
    runs.push_back({{"s", percent_json(key.strength)}, {"seed", key.seed}, {"counts", counts}, {"confusions", conf}});
  }
  j["runs"] = runs;

  const auto curves = metric_curves(table);
  json per_class = json::object();
  for (std::size_t k = 0; k < curves.classes.size(); ++k) {
    json acc_or = json::array();
    json acc_real = json::array();
    json fp_or = json::array();
    json fn_or = json::array();
    json fp_real = json::array();
    json fn_real = json::array();
    for (const auto& p : curves.points[k]) {
      acc_or.push_back(mean_se_json(p.acc_original));
      acc_real.push_back(mean_se_json(p.acc_real));
      fp_or.push_back(p.fp_original);
      fn_or.push_back(p.fn_original);
      fp_real.push_back(p.fp_real);
      fn_real.push_back(p.fn_real);
    }
    json c{{"acc_original", acc_or}, {"fp_original", fp_or}, {"fn_original", fn_or}};
    if (curves.has_multilabel) {
      c["acc_real"] = acc_real;
      c["fp_real"] = fp_real;
      c["fn_real"] = fn_real;
    }
    per_class[curves.classes[k]] = c;
  }
  j["curves"] = per_class;

  if (curves.grid.size() >= 2) {
    json drops = json::object();
    for (const auto& [cls, d] : accuracy_drop(curves)) {
      drops[cls] = {{"original", optional_number(d.original)}, {"real", optional_number(d.real)}};
    }
    j["accuracy_drop"] = drops;
    json growth = json::object();
    growth["original"] = fp_growth(curves, LabelMode::original);
    if (curves.has_multilabel) growth["real"] = fp_growth(curves, LabelMode::multilabel);
    j["fp_growth"] = growth;
  }
  return finish(j, manifest);
}

EvaluationTable parse_metrics(std::string_view data) {
  const auto j = parse_document(data, "metrics");
  EvaluationTable table;
  if (!j.contains("classes") || !j["classes"].is_array()) throw ValidationError("field 'classes' must be an array");
  for (const auto& c : j["classes"]) {
    if (!c.is_string()) throw ValidationError("class ids must be strings");
    table.classes.push_back(c.get<std::string>());
  }
  if (!std::is_sorted(table.classes.begin(), table.classes.end()) ||
      std::adjacent_find(table.classes.begin(), table.classes.end()) != table.classes.end()) {
    throw ValidationError("class list must be sorted and unique");
  }
  table.has_multilabel = j.value("has_multilabel", false);
  if (!j.contains("runs") || !j["runs"].is_array()) throw ValidationError("field 'runs' must be an array");
  for (const auto& r : j["runs"]) {
    if (!r.contains("seed") || !r["seed"].is_number_integer()) throw ValidationError("run seed must be an integer");
    RunKey key{Strength(number(r, "s")), r["seed"].get<std::int64_t>()};
    RunCounts run;
    run.classes.resize(table.classes.size());
    if (!r.contains("counts") || !r["counts"].is_object()) throw ValidationError("run counts must be an object");
    for (const auto& [cls, c] : r["counts"].items()) run.classes[table.class_index(cls)] = counts_from_json(c);
    if (r.contains("confusions")) {
      for (const auto& c : r["confusions"]) {
        if (!c.is_array() || c.size() != 3 || !c[0].is_string() || !c[1].is_string() || !c[2].is_number_integer()) {
          throw ValidationError("confusions must be [true, predicted, count] triples");
        }
        run.confusions[{table.class_index(c[0].get<std::string>()), table.class_index(c[1].get<std::string>())}] =
            c[2].get<std::int64_t>();
      }
    }
    if (!table.runs.emplace(key, std::move(run)).second) {
      throw ValidationError("duplicate run (s=" + to_string(key.strength) + ", seed=" + std::to_string(key.seed) + ")");
    }
  }
  return table;
}

std::string confusions_to_json(const ConfusionCurves& curves, double min_delta_cr, const RunManifest* manifest) {
  json j = artifact("confusions");
  j["classes"] = curves.classes;
  j["grid"] = grid_json(curves.grid);
  j["min_delta_cr"] = min_delta_cr;
  json pairs = json::array();
  for (const auto& p : curves.growing_pairs(min_delta_cr)) {
    json rates = json::array();
    for (std::size_t g = 0; g < curves.grid.size(); ++g) rates.push_back(optional_number(curves.rate(p.k, p.l, g)));
    json reverse = json::array();
    for (std::size_t g = 0; g < curves.grid.size(); ++g) reverse.push_back(optional_number(curves.rate(p.l, p.k, g)));
    pairs.push_back({{"true", curves.classes[p.k]},
                     {"predicted", curves.classes[p.l]},
                     {"delta_cr", p.delta},
                     {"delta_cr_star", curves.delta_reverse(p.l, p.k)},
                     {"rates", rates},
                     {"reverse_rates", reverse}});
  }
  j["pairs"] = pairs;
  return finish(j, manifest);
}

std::string confusion_report_to_json(const ConfusionReport& report, const RunManifest* manifest) {
  json j = artifact("confusion_report");
  const auto& c = report.config;
  json selector;
  if (const auto* top = std::get_if<TopN>(&c.selector)) {
    selector = {{"top", top->n}};
  } else {
    selector = {{"min_drop", std::get<MinDrop>(c.selector).threshold}};
  }
  const char* mode = c.mode == AffectedMode::original ? "original" : c.mode == AffectedMode::multilabel ? "real" : "either";
  j["config"] = {{"selector", selector},
                 {"mode", mode},
                 {"min_delta_cr", c.min_delta_cr},
                 {"exclude_subtree", c.exclude_subtree ? json(*c.exclude_subtree) : json(nullptr)},
                 {"thresholds",
                  {{"overlap", c.thresholds.overlap},
                   {"iou", c.thresholds.iou},
                   {"wordnet", c.thresholds.wordnet},
                   {"embedding", c.thresholds.embedding}}}};
  json entries = json::array();
  for (const auto& e : report.entries) {
    json partners = json::array();
    for (const auto& p : e.partners) {
      partners.push_back({{"class", p.cls},
                          {"delta_cr", p.delta_cr},
                          {"delta_cr_star", p.delta_cr_star},
                          {"c_kl", optional_number(p.scores.c_kl)},
                          {"c_lk", optional_number(p.scores.c_lk)},
                          {"iou", optional_number(p.scores.iou)},
                          {"wn_sim", optional_number(p.scores.wn_sim)},
                          {"embed_sim", optional_number(p.scores.embed_sim)},
                          {"category", to_string(p.category)}});
    }
    entries.push_back({{"class", e.cls},
                       {"delta_acc_original", optional_number(e.delta_acc_original)},
                       {"delta_acc_real", optional_number(e.delta_acc_real)},
                       {"partners", partners}});
  }
  j["entries"] = entries;
  json counts = json::object();
  for (auto cat : kAllCategories) {
    const auto it = report.category_counts.find(cat);
    counts[std::string(to_string(cat))] = it == report.category_counts.end() ? 0 : it->second;
  }
  j["category_counts"] = counts;
  j["total_pairs"] = report.total_pairs();
  return finish(j, manifest);
}

// ---------------------------------------------------------------------------

namespace {

json placements_json(const std::vector<BlockPlacement>& ps) {
  json arr = json::array();
  for (const auto& p : ps) arr.push_back({{"block", p.block}, {"slot", p.slot}, {"amplitude", p.amplitude}});
  return arr;
}

std::vector<BlockPlacement> placements_from_json(const json& arr) {
  if (!arr.is_array()) throw ValidationError("block placements must be an array");
  std::vector<BlockPlacement> out;
  for (const auto& p : arr) {
    BlockPlacement b;
    b.block = unsigned_number(p, "block");
    b.slot = unsigned_number(p, "slot");
    if (p.contains("amplitude")) b.amplitude = number(p, "amplitude");
    out.push_back(b);
  }
  return out;
}

}  // namespace

std::string sim_config_to_json(const SimConfig& c) {
  json j = artifact("sim_config");
  j["canvas_length"] = c.canvas_length;
  j["block_dim"] = c.block_dim;
  j["num_blocks"] = c.num_blocks;
  j["prototype_scale"] = c.prototype_scale;
  j["prototype_seed"] = c.prototype_seed;
  j["noise_sigma"] = c.noise_sigma;
  json classes = json::array();
  for (const auto& k : c.classes) {
    json co = json::array();
    for (const auto& o : k.co_occurrences) co.push_back({{"probability", o.probability}, {"blocks", placements_json(o.blocks)}});
    classes.push_back({{"name", k.name},
                       {"composition", placements_json(k.composition)},
                       {"co_occurrences", co},
                       {"train_count", k.train_count},
                       {"val_count", k.val_count}});
  }
  j["classes"] = classes;
  j["grid"] = grid_json(c.grid);
  j["seeds"] = c.seeds;
  j["trainer"] = {{"epochs", c.trainer.epochs},
                  {"learning_rate", c.trainer.learning_rate},
                  {"label_smoothing", c.trainer.label_smoothing},
                  {"batch_size", c.trainer.batch_size}};
  j["root_seed"] = c.root_seed;
  return j.dump(2) + "\n";
}

SimConfig parse_sim_config(std::string_view data) {
  const auto j = parse_document(data, "sim_config");
  SimConfig c;  // absent fields keep their defaults
  if (j.contains("canvas_length")) c.canvas_length = unsigned_number(j, "canvas_length");
  if (j.contains("block_dim")) c.block_dim = unsigned_number(j, "block_dim");
  if (j.contains("num_blocks")) c.num_blocks = unsigned_number(j, "num_blocks");
  if (j.contains("prototype_scale")) c.prototype_scale = number(j, "prototype_scale");
  if (j.contains("prototype_seed")) c.prototype_seed = unsigned_number(j, "prototype_seed");
  if (j.contains("noise_sigma")) c.noise_sigma = number(j, "noise_sigma");
  if (j.contains("seeds")) c.seeds = unsigned_number(j, "seeds");
  if (j.contains("root_seed")) c.root_seed = unsigned_number(j, "root_seed");
  if (j.contains("grid")) {
    for (const auto& s : j["grid"]) {
      if (!s.is_number()) throw ValidationError("grid entries must be numbers");
      c.grid.push_back(Strength(s.get<double>()));
    }
  }
  if (j.contains("trainer")) {
    const auto& t = j["trainer"];
    if (t.contains("epochs")) c.trainer.epochs = unsigned_number(t, "epochs");
    if (t.contains("learning_rate")) c.trainer.learning_rate = number(t, "learning_rate");
    if (t.contains("label_smoothing")) c.trainer.label_smoothing = number(t, "label_smoothing");
    if (t.contains("batch_size")) c.trainer.batch_size = unsigned_number(t, "batch_size");
  }
  if (j.contains("classes")) {
    for (const auto& k : j["classes"]) {
      SimClass cls;
      cls.name = text(k, "name");
      cls.composition = placements_from_json(k.value("composition", json::array()));
      if (k.contains("co_occurrences")) {
        for (const auto& o : k["co_occurrences"]) {
          cls.co_occurrences.push_back({number(o, "probability"), placements_from_json(o.value("blocks", json::array()))});
        }
      }
      if (k.contains("train_count")) cls.train_count = unsigned_number(k, "train_count");
      if (k.contains("val_count")) cls.val_count = unsigned_number(k, "val_count");
      c.classes.push_back(std::move(cls));
    }
  }
  c.validate();
  return c;
}

std::string intervention_to_json(const InterventionResult& result, const RunManifest* manifest) {
  json j = artifact("intervention");
  j["affected"] = result.affected;
  json rows = json::array();
  for (const auto& r : result.rows) {
    rows.push_back({{"name", r.name},
                    {"overall", mean_se_json(r.overall)},
                    {"affected", mean_se_json(r.affected)},
                    {"remaining", mean_se_json(r.remaining)},
                    {"policy", json::parse(policy_to_json(r.policy))}});
  }
  j["rows"] = rows;
  return finish(j, manifest);
}

}  // namespace augbias
