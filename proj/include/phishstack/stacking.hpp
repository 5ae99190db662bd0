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

#ifndef PHISHSTACK_STACKING_HPP
#define PHISHSTACK_STACKING_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "phishstack/dataset.hpp"
#include "phishstack/feature_selection.hpp"
#include "phishstack/learners.hpp"
#include "phishstack/meta_mlp.hpp"

namespace phishstack {

/// A candidate base classifier together with its selected feature subset.
struct PoolMember {
  LearnerSpec spec;
  FeatureMask mask;
};

/// Out-of-fold P(phishing) columns, one per pool member, in the original
/// training-row order. Row i was produced by a model whose training fold set
/// excluded i.
struct MetaFeatures {
  Matrix probs;                         // n_train x |pool|
  std::vector<PoolMember> column_specs;
  std::vector<int> fold_provenance;     // per-row producing fold
  FoldPlan plan;
  std::vector<std::vector<int>> fold_train_rows;  // rows used to fit models of each fold

  /// Number of rows whose producing model saw them during training; always 0
  /// for a correct pipeline, checked as a hard error in oof_probabilities.
  std::size_t leakage_violations() const;
};

/// The assembled two-level ensemble.
struct StackModel {
  std::vector<PoolMember> bases;
  std::vector<TrainedLearner> fitted_bases;  // refit on the full outer-training set
  MlpModel meta;
  MlpConfig meta_config;
  int k_inner = 0;
  std::uint64_t seed = 0;
  std::size_t n_features_full = 0;  // column count of the original dataset
};

/// For each inner fold, fits every pool member on the remaining folds and
/// predicts the held-out fold, assembling leak-free meta-features.
MetaFeatures oof_probabilities(const Dataset& train, const std::vector<PoolMember>& pool,
                               int k, std::uint64_t seed);

/// Greedy forward selection record: chosen candidate indices in addition
/// order plus the stacked-accuracy sequence that drove each addition.
struct GreedySelection {
  std::vector<std::size_t> selected;  // indices into the candidates list
  std::vector<double> score_trace;    // stacked accuracy after each addition
  std::vector<double> standalone_cv;  // per-candidate OOF accuracy (ranking)
};

/// Seeds the pool with the best standalone candidate, then repeatedly adds
/// the candidate whose inclusion raises the stacked holdout accuracy the
/// most, while the improvement exceeds epsilon = 1e-4.
GreedySelection greedy_select(const Dataset& train, const std::vector<PoolMember>& candidates,
                              int k, std::uint64_t seed, const MlpConfig& meta_config);

/// Trains the meta-learner on the pool's out-of-fold probabilities and refits
/// every base on the full training set for inference.
StackModel fit_stack(const Dataset& train, const std::vector<PoolMember>& selected, int k,
                     std::uint64_t seed, const MlpConfig& meta_config);

/// Final P(phishing): each base predicts on its masked view of X, the meta
/// network maps the stacked columns to the output.
std::vector<double> predict_stack(const StackModel& model, const Matrix& X);

}  // namespace phishstack

#endif  // PHISHSTACK_STACKING_HPP
