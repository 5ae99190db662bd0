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

#ifndef PHISHSTACK_LEARNERS_HPP
#define PHISHSTACK_LEARNERS_HPP

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "phishstack/binary_io.hpp"
#include "phishstack/dataset.hpp"
#include "phishstack/matrix.hpp"

namespace phishstack {

/// The base-classifier pool. Order is canonical: it breaks ties in greedy
/// selection and fixes report row order.
enum class LearnerKind : int {
  LR = 0,
  NB,
  KNN,
  SVM_LINEAR,
  DTREE,
  RF,
  EXTRA_TREES,
  GBM,
  ADABOOST,
};

inline constexpr std::array<LearnerKind, 9> kAllLearnerKinds = {
    LearnerKind::LR,         LearnerKind::NB,  LearnerKind::KNN,
    LearnerKind::SVM_LINEAR, LearnerKind::DTREE, LearnerKind::RF,
    LearnerKind::EXTRA_TREES, LearnerKind::GBM, LearnerKind::ADABOOST,
};

const char* kind_name(LearnerKind kind);
LearnerKind kind_from_name(std::string_view name);

/// Per-kind hyperparameters, preset to the reference defaults. Irrelevant
/// fields are ignored by kinds that do not use them.
struct Hyperparams {
  // Tree ensembles: 100 trees, Gini, sqrt(d') features per split, unlimited
  // depth.
  int tree_count = 100;
  // Gradient boosting: 100 stages of depth-3 regression trees, shrinkage 0.1.
  int boost_stages = 100;
  double learning_rate = 0.1;
  int gbm_max_depth = 3;
  // AdaBoost: 50 depth-1 stumps.
  int stump_count = 50;
  // KNN.
  int k_neighbors = 5;
  // Logistic regression: L2 penalty, gradient descent to tolerance or cap.
  double lr_l2_penalty = 1.0;
  int lr_max_epochs = 1000;
  double lr_grad_tol = 1e-5;
  // Linear SVM: hinge-loss SGD plus Platt-style calibration.
  double svm_regularization = 1.0;
  int svm_epochs = 200;
  // Gaussian NB.
  double nb_variance_floor = 1e-9;

  void validate(LearnerKind kind) const;

  /// Name-based access used by config files and serialization.
  double get(const std::string& name) const;
  void set(const std::string& name, double value);
  static const std::vector<std::string>& field_names();

  bool operator==(const Hyperparams&) const = default;
};

struct LearnerSpec {
  LearnerKind kind = LearnerKind::LR;
  Hyperparams hp;
  std::uint64_t seed = 0;
};

class LearnerImpl;

/// Opaque fitted state of one base classifier. Immutable and cheap to copy.
class TrainedLearner {
 public:
  TrainedLearner() = default;

  bool valid() const { return impl_ != nullptr; }
  const LearnerSpec& spec() const;
  std::size_t trained_feature_count() const;

  /// P(phishing) per row. X must have trained_feature_count() columns.
  std::vector<double> predict_proba(const Matrix& X) const;

  /// Non-negative per-feature weights: |coefficients| for LR/SVM_LINEAR,
  /// impurity-decrease sums for tree kinds, permutation importance (mean
  /// accuracy drop over 3 shuffles per column, clamped at 0) for KNN and NB.
  /// (X, y) is the training data, used by the permutation fallback.
  std::vector<double> feature_importance(const Matrix& X, const std::vector<int>& y,
                                         std::uint64_t seed) const;

  /// Per-boosting-round training error for GBM/ADABOOST; empty otherwise.
  std::vector<double> staged_training_error() const;

  void save(BinaryWriter& w) const;
  static TrainedLearner load(BinaryReader& r);

 private:
  friend TrainedLearner fit(const LearnerSpec&, const Matrix&, const std::vector<int>&,
                            std::uint64_t);
  std::shared_ptr<const LearnerImpl> impl_;
};

/// Trains one base classifier. Deterministic for fixed (spec, X, y, fit_salt);
/// the salt decorrelates repeated fits (e.g. across folds) without new specs.
TrainedLearner fit(const LearnerSpec& spec, const Matrix& X, const std::vector<int>& y,
                   std::uint64_t fit_salt = 0);

/// Module harness: mean accuracy of spec over a stratified k-fold split of ds,
/// fitting on k-1 folds and scoring the held-out fold at threshold 0.5.
double cv_accuracy(const Dataset& ds, const LearnerSpec& spec, int k, std::uint64_t seed);

}  // namespace phishstack

#endif  // PHISHSTACK_LEARNERS_HPP
