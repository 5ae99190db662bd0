/*
 * Copyright 2026 The PhishStack Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "phishstack/runner.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "phishstack/errors.hpp"
#include "phishstack/parallel.hpp"
#include "phishstack/rng.hpp"

namespace phishstack {

namespace {

std::string trim(const std::string& s) {
  const char* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, sep)) {
    const std::string t = trim(token);
    if (!t.empty()) parts.push_back(t);
  }
  return parts;
}

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

}  // namespace

std::string percent2(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", fraction * 100.0);
  return buf;
}

void ExperimentConfig::validate() const {
  if (dataset_path.empty()) throw ConfigError("config: dataset path missing");
  if (schema_path.empty()) throw ConfigError("config: schema path missing");
  if (!std::filesystem::exists(dataset_path)) {
    throw ConfigError("config: dataset file not found: " + dataset_path);
  }
  if (!std::filesystem::exists(schema_path)) {
    throw ConfigError("config: schema file not found: " + schema_path);
  }
  if (outer_k < 2) throw ConfigError("config: outer_k must be >= 2");
  if (inner_k < 2) throw ConfigError("config: inner_k must be >= 2");
  if (candidates.empty()) throw ConfigError("config: candidate list is empty");
  for (LearnerKind kind : fixed_bases) {
    if (std::find(candidates.begin(), candidates.end(), kind) == candidates.end()) {
      throw ConfigError(std::string("config: fixed base ") + kind_name(kind) +
                        " is not among the candidates");
    }
  }
}

std::uint64_t ExperimentConfig::hash() const {
  BinaryWriter w;
  w.str(dataset_path);
  w.str(schema_path);
  w.u64(seed);
  w.i32(outer_k);
  w.i32(inner_k);
  for (LearnerKind kind : candidates) w.i32(static_cast<int>(kind));
  for (const MlpConfig& cfg : mlp_candidates) {
    w.str(cfg.topology_string());
    w.i32(cfg.max_epochs);
    w.i32(cfg.batch_size);
    w.f64(cfg.learning_rate);
    w.i32(cfg.early_stop_patience);
  }
  w.u8(skip_rfecv ? 1 : 0);
  for (LearnerKind kind : fixed_bases) w.i32(static_cast<int>(kind));
  for (const auto& [key, value] : hyperparam_overrides) {
    w.str(key);
    w.f64(value);
  }
  const std::string& buf = w.buffer();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : buf) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);

  ExperimentConfig cfg;
  cfg.candidates.clear();
  std::vector<std::string> mlp_topologies;
  MlpConfig mlp_training;  // shared training settings for every topology

  std::string line;
  std::size_t line_no = 0;
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  auto resolve = [&base](const std::string& p) {
    const std::filesystem::path fp(p);
    return fp.is_absolute() || base.empty() ? fp.string() : (base / fp).string();
  };

  while (std::getline(in, line)) {
    ++line_no;
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line.erase(hash_pos);
    const std::string text = trim(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));

    if (key == "dataset") {
      cfg.dataset_path = resolve(value);
    } else if (key == "schema") {
      cfg.schema_path = resolve(value);
    } else if (key == "output_dir") {
      cfg.output_dir = resolve(value);
    } else if (key == "seed") {
      cfg.seed = std::stoull(value);
    } else if (key == "outer_k") {
      cfg.outer_k = std::stoi(value);
    } else if (key == "inner_k") {
      cfg.inner_k = std::stoi(value);
    } else if (key == "candidates") {
      for (const auto& name : split(value, ',')) cfg.candidates.push_back(kind_from_name(name));
    } else if (key == "fixed_bases") {
      for (const auto& name : split(value, ',')) cfg.fixed_bases.push_back(kind_from_name(name));
    } else if (key == "skip_rfecv") {
      cfg.skip_rfecv = (value == "true" || value == "1");
    } else if (key == "mlp_candidates") {
      mlp_topologies = split(value, ';');
    } else if (key == "mlp.max_epochs") {
      mlp_training.max_epochs = std::stoi(value);
    } else if (key == "mlp.batch_size") {
      mlp_training.batch_size = std::stoi(value);
    } else if (key == "mlp.learning_rate") {
      mlp_training.learning_rate = std::stod(value);
    } else if (key == "mlp.early_stop_patience") {
      mlp_training.early_stop_patience = std::stoi(value);
    } else if (key.rfind("hyperparam.", 0) == 0) {
      cfg.hyperparam_overrides[key.substr(11)] = std::stod(value);
    } else {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": unknown key \"" + key + "\"");
    }
  }

  if (cfg.candidates.empty()) {
    cfg.candidates.assign(kAllLearnerKinds.begin(), kAllLearnerKinds.end());
  }
  if (mlp_topologies.empty()) {
    cfg.mlp_candidates = default_mlp_candidates(cfg.seed);
  } else {
    for (const auto& topo : mlp_topologies) {
      MlpConfig c;
      c.hidden_layers = MlpConfig::parse_topology(topo);
      c.seed = cfg.seed;
      cfg.mlp_candidates.push_back(std::move(c));
    }
  }
  for (MlpConfig& c : cfg.mlp_candidates) {
    c.max_epochs = mlp_training.max_epochs;
    c.batch_size = mlp_training.batch_size;
    c.learning_rate = mlp_training.learning_rate;
    c.early_stop_patience = mlp_training.early_stop_patience;
  }
  return cfg;
}

LearnerSpec ExperimentConfig::spec_for(LearnerKind kind) const {
  LearnerSpec spec;
  spec.kind = kind;
  spec.seed = seed;
  const std::string prefix = std::string(kind_name(kind)) + ".";
  for (const auto& [key, value] : hyperparam_overrides) {
    if (key.rfind(prefix, 0) == 0) spec.hp.set(key.substr(prefix.size()), value);
  }
  spec.hp.validate(kind);
  return spec;
}

MetricsReport mean_report(const std::vector<MetricsReport>& reports) {
  MetricsReport mean;
  if (reports.empty()) return mean;
  for (const MetricsReport& r : reports) {
    mean.accuracy += r.accuracy;
    mean.sensitivity += r.sensitivity;
    mean.precision += r.precision;
    mean.specificity += r.specificity;
    mean.gmean += r.gmean;
    mean.f1 += r.f1;
    mean.roc_auc += r.roc_auc;
    mean.confusion.tp += r.confusion.tp;
    mean.confusion.fp += r.confusion.fp;
    mean.confusion.tn += r.confusion.tn;
    mean.confusion.fn += r.confusion.fn;
    mean.roc_auc_valid = mean.roc_auc_valid || r.roc_auc_valid;
  }
  const double k = static_cast<double>(reports.size());
  mean.accuracy /= k;
  mean.sensitivity /= k;
  mean.precision /= k;
  mean.specificity /= k;
  mean.gmean /= k;
  mean.f1 /= k;
  mean.roc_auc /= k;
  mean.threshold = reports.front().threshold;
  return mean;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const double t_start = now_seconds();

  const DatasetSchema schema = DatasetSchema::load(cfg.schema_path);
  std::vector<std::string> warnings;
  const Dataset ds = load_csv(cfg.dataset_path, schema, &warnings);
  for (const std::string& w : warnings) {
    std::cerr << "warning: " << cfg.dataset_path << ": " << w << "\n";
  }

  const FoldPlan outer_plan = stratified_kfold(ds, cfg.outer_k, cfg.seed);

  ExperimentResult result;
  result.config = cfg;
  result.folds.resize(cfg.outer_k);

  parallel_for(cfg.outer_k, [&](std::size_t fold) {
    try {
      const double t_fold = now_seconds();
      auto [train, test] = split_by_fold(ds, outer_plan, static_cast<int>(fold));
      FoldResult fr;
      fr.fold = static_cast<int>(fold);

      // Per-candidate RFECV masks on the outer-training set only.
      for (LearnerKind kind : cfg.candidates) {
        const LearnerSpec spec = cfg.spec_for(kind);
        if (cfg.skip_rfecv) {
          fr.masks[kind] = FeatureMask::full(kind, train.d());
        } else {
          auto [mask, trace] =
              rfecv(train, spec, cfg.inner_k,
                    mix_seed(cfg.seed, 0xfec0 + fold, static_cast<int>(kind)));
          fr.masks[kind] = std::move(mask);
        }
      }

      // Standalone candidate evaluation on the outer-test fold.
      for (LearnerKind kind : cfg.candidates) {
        const LearnerSpec spec = cfg.spec_for(kind);
        const FeatureMask& mask = fr.masks[kind];
        const TrainedLearner model =
            fit(spec, apply_mask(train.features, mask), train.labels,
                mix_seed(0x57a, fold, static_cast<int>(kind)));
        const std::vector<double> p = model.predict_proba(apply_mask(test.features, mask));
        fr.candidate_metrics[kind] = evaluate(test.labels, p);
      }

      std::vector<PoolMember> pool;
      for (LearnerKind kind : cfg.candidates) {
        pool.push_back({cfg.spec_for(kind), fr.masks[kind]});
      }

      const std::uint64_t inner_seed = mix_seed(cfg.seed, 0x1aa, fold);
      MlpConfig greedy_meta = cfg.mlp_candidates.front();

      std::vector<PoolMember> selected;
      if (!cfg.fixed_bases.empty()) {
        for (LearnerKind kind : cfg.fixed_bases) {
          const auto it = std::find_if(pool.begin(), pool.end(), [kind](const PoolMember& m) {
            return m.spec.kind == kind;
          });
          selected.push_back(*it);
          fr.selected_bases.push_back(kind);
        }
      } else {
        const GreedySelection greedy =
            greedy_select(train, pool, cfg.inner_k, inner_seed, greedy_meta);
        for (std::size_t idx : greedy.selected) {
          selected.push_back(pool[idx]);
          fr.selected_bases.push_back(pool[idx].spec.kind);
        }
      }

      // Grid search over meta topologies on this fold's meta-features.
      const MetaFeatures meta_feats =
          oof_probabilities(train, selected, cfg.inner_k, inner_seed);
      std::vector<MlpConfig> grid = cfg.mlp_candidates;
      for (MlpConfig& c : grid) c.seed = mix_seed(cfg.seed, 0x91d, fold);
      fr.chosen_mlp = mlp_grid_search(grid, meta_feats.probs, train.labels, cfg.inner_k,
                                      mix_seed(cfg.seed, 0x6d5, fold));

      const StackModel stack =
          fit_stack(train, selected, cfg.inner_k, inner_seed, fr.chosen_mlp);
      const std::vector<double> p = predict_stack(stack, test.features);
      fr.stacked_metrics = evaluate(test.labels, p);

      if (!cfg.output_dir.empty()) {
        const std::string model_path =
            (std::filesystem::path(cfg.output_dir) / "models" /
             ("fold_" + std::to_string(fold) + ".psm"))
                .string();
        save_model(stack, schema.hash(), model_path);
      }

      fr.seconds = now_seconds() - t_fold;
      result.folds[fold] = std::move(fr);
    } catch (const std::exception& e) {
      throw Error("outer fold " + std::to_string(fold) + " failed: " + e.what());
    }
  });

  for (LearnerKind kind : cfg.candidates) {
    std::vector<MetricsReport> reports;
    for (const FoldResult& fr : result.folds) reports.push_back(fr.candidate_metrics.at(kind));
    result.candidate_summary[kind] = mean_report(reports);
  }
  std::vector<MetricsReport> stacked;
  for (const FoldResult& fr : result.folds) stacked.push_back(fr.stacked_metrics);
  result.stacked_summary = mean_report(stacked);
  result.total_seconds = now_seconds() - t_start;
  return result;
}

namespace {

constexpr const char* kTableHeader =
    "Classifier,Accuracy,Sensitivity,Precision,G-mean,F1-score,ROC-AUC";

std::string metrics_row(const std::string& name, const MetricsReport& m) {
  std::string row = name;
  for (double v : {m.accuracy, m.sensitivity, m.precision, m.gmean, m.f1, m.roc_auc}) {
    row += ',';
    row += percent2(v);
  }
  return row;
}

std::string join_kinds(const std::vector<LearnerKind>& kinds, char sep) {
  std::string out;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    if (i) out += sep;
    out += kind_name(kinds[i]);
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace

void emit_report(const ExperimentResult& result, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const ExperimentConfig& cfg = result.config;

  // Candidate summary table (the per-dataset classifier table).
  {
    std::string csv = std::string(kTableHeader) + "\n";
    for (LearnerKind kind : cfg.candidates) {
      csv += metrics_row(kind_name(kind), result.candidate_summary.at(kind)) + "\n";
    }
    write_file((std::filesystem::path(dir) / "candidates.csv").string(), csv);
  }

  // Stacked model summary.
  {
    std::string csv = "Dataset,Accuracy,Sensitivity,Precision,G-mean,F1-score,ROC-AUC\n";
    csv += metrics_row(std::filesystem::path(cfg.dataset_path).filename().string(),
                       result.stacked_summary) +
           "\n";
    write_file((std::filesystem::path(dir) / "stacked.csv").string(), csv);
  }

  // Per-fold detail (full precision).
  {
    std::string csv =
        "fold,model,accuracy,sensitivity,precision,specificity,gmean,f1,roc_auc,"
        "tp,fp,tn,fn,selected_bases,mlp\n";
    char buf[256];
    auto detail_row = [&](int fold, const std::string& name, const MetricsReport& m,
                          const std::string& bases, const std::string& mlp) {
      std::snprintf(buf, sizeof(buf),
                    "%d,%s,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%lld,%lld,%lld,%lld,%s,%s\n",
                    fold, name.c_str(), m.accuracy, m.sensitivity, m.precision, m.specificity,
                    m.gmean, m.f1, m.roc_auc, static_cast<long long>(m.confusion.tp),
                    static_cast<long long>(m.confusion.fp),
                    static_cast<long long>(m.confusion.tn),
                    static_cast<long long>(m.confusion.fn), bases.c_str(), mlp.c_str());
      csv += buf;
    };
    for (const FoldResult& fr : result.folds) {
      for (LearnerKind kind : cfg.candidates) {
        detail_row(fr.fold, kind_name(kind), fr.candidate_metrics.at(kind), "", "");
      }
      detail_row(fr.fold, "STACKED", fr.stacked_metrics, join_kinds(fr.selected_bases, '+'),
                 fr.chosen_mlp.topology_string());
    }
    write_file((std::filesystem::path(dir) / "per_fold.csv").string(), csv);
  }

  // Selected feature masks per fold (tab-separated, 0-based indices).
  {
    std::string text = "fold\tclassifier\tcv_score\tselected_indices\n";
    for (const FoldResult& fr : result.folds) {
      for (LearnerKind kind : cfg.candidates) {
        const FeatureMask& mask = fr.masks.at(kind);
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%d\t%s\t%.6f\t", fr.fold, kind_name(kind),
                      mask.cv_score_at_selection);
        text += buf;
        for (std::size_t i = 0; i < mask.selected.size(); ++i) {
          if (i) text += ',';
          text += std::to_string(mask.selected[i]);
        }
        text += '\n';
      }
    }
    write_file((std::filesystem::path(dir) / "masks.txt").string(), text);
  }

  // Run manifest (deterministic: no wall-clock content).
  {
    char buf[64];
    std::string text;
    text += "format_version = 1\n";
    text += "seed = " + std::to_string(cfg.seed) + "\n";
    std::snprintf(buf, sizeof(buf), "config_hash = %016llx\n",
                  static_cast<unsigned long long>(cfg.hash()));
    text += buf;
    text += "dataset = " + cfg.dataset_path + "\n";
    text += "schema = " + cfg.schema_path + "\n";
    text += "outer_k = " + std::to_string(cfg.outer_k) + "\n";
    text += "inner_k = " + std::to_string(cfg.inner_k) + "\n";
    text += "candidates = " + join_kinds(cfg.candidates, ',') + "\n";
    text += "skip_rfecv = " + std::string(cfg.skip_rfecv ? "true" : "false") + "\n";
    if (!cfg.fixed_bases.empty()) {
      text += "fixed_bases = " + join_kinds(cfg.fixed_bases, ',') + "\n";
    }
    std::string topologies;
    for (std::size_t i = 0; i < cfg.mlp_candidates.size(); ++i) {
      if (i) topologies += ';';
      topologies += cfg.mlp_candidates[i].topology_string();
    }
    text += "mlp_candidates = " + topologies + "\n";
    write_file((std::filesystem::path(dir) / "manifest.txt").string(), text);
  }

  // Timings live apart so every other artifact stays byte-stable.
  {
    char buf[128];
    std::string text;
    for (const FoldResult& fr : result.folds) {
      std::snprintf(buf, sizeof(buf), "fold %d: %.3f s\n", fr.fold, fr.seconds);
      text += buf;
    }
    std::snprintf(buf, sizeof(buf), "total: %.3f s\n", result.total_seconds);
    text += buf;
    write_file((std::filesystem::path(dir) / "timings.txt").string(), text);
  }
}

std::string render_report(const std::string& dir) {
  const std::string per_fold = (std::filesystem::path(dir) / "per_fold.csv").string();
  std::ifstream in(per_fold);
  if (!in) throw IoError("cannot open " + per_fold + " (is this an output directory?)");

  struct Acc {
    std::vector<MetricsReport> reports;
  };
  std::map<std::string, Acc> by_model;
  std::vector<std::string> model_order;

  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    const std::vector<std::string> cells = split(line, ',');
    if (cells.size() < 13) continue;
    MetricsReport m;
    m.accuracy = std::stod(cells[2]);
    m.sensitivity = std::stod(cells[3]);
    m.precision = std::stod(cells[4]);
    m.specificity = std::stod(cells[5]);
    m.gmean = std::stod(cells[6]);
    m.f1 = std::stod(cells[7]);
    m.roc_auc = std::stod(cells[8]);
    const std::string& model = cells[1];
    if (!by_model.count(model)) model_order.push_back(model);
    by_model[model].reports.push_back(m);
  }

  std::ostringstream out;
  out << kTableHeader << "\n";
  for (const std::string& model : model_order) {
    out << metrics_row(model, mean_report(by_model[model].reports)) << "\n";
  }
  return out.str();
}

namespace {

// Lenient CSV read for prediction: features via schema, label column optional,
// zero data rows allowed.
std::pair<Matrix, std::optional<std::vector<int>>> load_features_csv(
    const std::string& path, const DatasetSchema& schema) {
  schema.validate();
  std::ifstream in(path);
  if (!in) throw IoError("cannot open CSV file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw EmptyDatasetError("empty file: " + path);
  std::vector<std::string> header;
  {
    std::string cell;
    std::istringstream hs(line);
    while (std::getline(hs, cell, ',')) {
      if (!cell.empty() && cell.back() == '\r') cell.pop_back();
      header.push_back(trim(cell));
    }
  }
  auto find_col = [&](const std::string& name) -> int {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
  };
  std::vector<int> feature_idx;
  for (const auto& name : schema.feature_columns) {
    const int idx = find_col(name);
    if (idx < 0) throw MissingColumnError("column \"" + name + "\" not found in " + path);
    feature_idx.push_back(idx);
  }
  const int label_idx = find_col(schema.label_column);

  std::vector<double> values;
  std::vector<int> labels;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    {
      std::string cell;
      std::istringstream cs(line);
      while (std::getline(cs, cell, ','))
        cells.push_back(cell);
      if (line.size() && line.back() == ',') cells.push_back("");
    }
    if (cells.size() != header.size()) {
      throw NonNumericCellError("data row " + std::to_string(row) + " has " +
                                std::to_string(cells.size()) + " cells, header has " +
                                std::to_string(header.size()));
    }
    for (std::size_t j = 0; j < feature_idx.size(); ++j) {
      const std::string s = trim(cells[feature_idx[j]]);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw NonNumericCellError("non-numeric cell \"" + s + "\" at data row " +
                                  std::to_string(row) + ", column \"" +
                                  schema.feature_columns[j] + "\"");
      }
      values.push_back(v);
    }
    if (label_idx >= 0) {
      const std::string raw = trim(cells[label_idx]);
      if (raw == schema.positive_label_value) {
        labels.push_back(1);
      } else if (raw == schema.negative_label_value) {
        labels.push_back(0);
      } else {
        throw UnknownLabelValueError("unknown label value \"" + raw + "\" at data row " +
                                     std::to_string(row));
      }
    }
    ++row;
  }

  Matrix X(row, schema.feature_columns.size());
  X.data() = std::move(values);
  if (label_idx >= 0) return {std::move(X), std::move(labels)};
  return {std::move(X), std::nullopt};
}

}  // namespace

PredictBatchResult predict_batch(const std::string& model_path, const std::string& csv_path,
                                 const std::string& schema_path, double threshold) {
  const DatasetSchema schema = DatasetSchema::load(schema_path);
  const StackModel model = load_model(model_path, schema.hash());
  auto [X, labels] = load_features_csv(csv_path, schema);

  PredictBatchResult result;
  result.probabilities = predict_stack(model, X);
  result.predicted.reserve(result.probabilities.size());
  for (double p : result.probabilities) result.predicted.push_back(p > threshold ? 1 : 0);
  if (labels && !labels->empty()) {
    result.metrics = evaluate(*labels, result.probabilities, threshold);
  }
  return result;
}

std::string render_predictions(const PredictBatchResult& result, double threshold) {
  std::string out = "row,probability,predicted_label\n";
  char buf[96];
  for (std::size_t i = 0; i < result.probabilities.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%d\n", i, result.probabilities[i],
                  result.predicted[i]);
    out += buf;
  }
  if (result.metrics) {
    const MetricsReport& m = *result.metrics;
    std::snprintf(buf, sizeof(buf), "# threshold,%.17g\n", threshold);
    out += buf;
    auto footer = [&](const char* name, double v) {
      std::snprintf(buf, sizeof(buf), "# %s,%.6f\n", name, v);
      out += buf;
    };
    footer("accuracy", m.accuracy);
    footer("sensitivity", m.sensitivity);
    footer("precision", m.precision);
    footer("specificity", m.specificity);
    footer("gmean", m.gmean);
    footer("f1", m.f1);
    if (m.roc_auc_valid) footer("roc_auc", m.roc_auc);
    std::snprintf(buf, sizeof(buf), "# confusion,tp=%lld,fp=%lld,tn=%lld,fn=%lld\n",
                  static_cast<long long>(m.confusion.tp), static_cast<long long>(m.confusion.fp),
                  static_cast<long long>(m.confusion.tn),
                  static_cast<long long>(m.confusion.fn));
    out += buf;
  }
  return out;
}

}  // namespace phishstack
