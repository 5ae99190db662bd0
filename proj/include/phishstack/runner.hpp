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

#ifndef PHISHSTACK_RUNNER_HPP
#define PHISHSTACK_RUNNER_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "phishstack/dataset.hpp"
#include "phishstack/feature_selection.hpp"
#include "phishstack/metrics.hpp"
#include "phishstack/stacking.hpp"

namespace phishstack {

/// Parsed experiment configuration (plain-text key-value file).
struct ExperimentConfig {
  std::string dataset_path;
  std::string schema_path;
  std::uint64_t seed = 42;
  int outer_k = 10;
  int inner_k = 10;
  std::vector<LearnerKind> candidates{kAllLearnerKinds.begin(), kAllLearnerKinds.end()};
  std::vector<MlpConfig> mlp_candidates;  // filled with defaults when empty
  std::string output_dir;
  bool skip_rfecv = false;
  std::vector<LearnerKind> fixed_bases;  // non-empty overrides greedy selection
  // Optional per-kind hyperparameter overrides, e.g. {"RF.tree_count", 50}.
  std::map<std::string, double> hyperparam_overrides;

  void validate() const;
  std::uint64_t hash() const;

  static ExperimentConfig load(const std::string& path);
  LearnerSpec spec_for(LearnerKind kind) const;
};

/// Everything measured for one outer fold.
struct FoldResult {
  int fold = 0;
  std::map<LearnerKind, MetricsReport> candidate_metrics;
  MetricsReport stacked_metrics;
  std::vector<LearnerKind> selected_bases;  // in addition order
  std::map<LearnerKind, FeatureMask> masks;
  MlpConfig chosen_mlp;
  double seconds = 0.0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<FoldResult> folds;
  std::map<LearnerKind, MetricsReport> candidate_summary;  // mean over folds
  MetricsReport stacked_summary;
  double total_seconds = 0.0;
};

/// Arithmetic mean of per-fold reports, field by field; confusion counts sum.
MetricsReport mean_report(const std::vector<MetricsReport>& reports);

/// Runs the full nested protocol: per outer fold, per-candidate RFECV masks,
/// standalone candidate evaluation, greedy base selection, MLP grid search,
/// stack fitting, and outer-test scoring. Saves one model file per fold under
/// output_dir/models when output_dir is set.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Writes candidates.csv, stacked.csv, per_fold.csv, masks.txt, manifest.txt
/// and timings.txt. All files except timings.txt are byte-stable for a fixed
/// config and seed.
void emit_report(const ExperimentResult& result, const std::string& dir);

/// Re-renders the summary tables from an output directory written by
/// emit_report; returns the text that was printed.
std::string render_report(const std::string& dir);

void save_model(const StackModel& model, std::uint64_t schema_hash, const std::string& path);
StackModel load_model(const std::string& path, std::uint64_t expected_schema_hash);

/// Reads the model's schema hash without loading the payload.
std::uint64_t peek_model_schema_hash(const std::string& path);

struct PredictBatchResult {
  std::vector<double> probabilities;
  std::vector<int> predicted;           // strict threshold rule
  std::optional<MetricsReport> metrics; // present when the CSV carries labels
};

/// Scores a CSV of feature rows through a saved model. The label column is
/// optional for this operation; when present a metrics footer is computed.
PredictBatchResult predict_batch(const std::string& model_path, const std::string& csv_path,
                                 const std::string& schema_path, double threshold = 0.5);

/// Renders predict_batch output as CSV text (row,probability,label + footer).
std::string render_predictions(const PredictBatchResult& result, double threshold);

/// "97.49"-style fixed-point percent rendering shared by all reports.
std::string percent2(double fraction);

}  // namespace phishstack

#endif  // PHISHSTACK_RUNNER_HPP
