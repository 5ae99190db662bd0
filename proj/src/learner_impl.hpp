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

#ifndef PHISHSTACK_LEARNER_IMPL_HPP
#define PHISHSTACK_LEARNER_IMPL_HPP

#include <cmath>
#include <memory>
#include <span>
#include <vector>

#include "phishstack/binary_io.hpp"
#include "phishstack/learners.hpp"
#include "phishstack/matrix.hpp"
#include "phishstack/rng.hpp"

namespace phishstack {

inline double sigmoid(double z) {
  if (z >= 0.0) {
    const double e = std::exp(-z);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

/// Per-column min-max scaling to [0,1], fitted on training data only.
/// Constant columns map to 0.
struct MinMaxScaler {
  std::vector<double> lo;
  std::vector<double> inv_range;  // 0 for constant columns

  void fit(const Matrix& X);
  Matrix transform(const Matrix& X) const;

  void save(BinaryWriter& w) const;
  static MinMaxScaler load(BinaryReader& r);
};

class LearnerImpl {
 public:
  virtual ~LearnerImpl() = default;

  LearnerSpec spec;
  std::size_t feature_count = 0;

  virtual void predict_proba_into(const Matrix& X, std::span<double> out) const = 0;

  /// Default is permutation importance; kinds with native importances
  /// override.
  virtual std::vector<double> importance(const Matrix& X, const std::vector<int>& y,
                                         std::uint64_t seed) const;

  virtual std::vector<double> staged_training_error() const { return {}; }

  virtual void save_payload(BinaryWriter& w) const = 0;
};

/// Mean accuracy drop over `repeats` shuffles per column, clamped at 0.
/// Evaluation is capped at max_eval_rows rows (seeded subsample) to keep
/// wrapper feature selection tractable on large training sets.
std::vector<double> permutation_importance(const LearnerImpl& model, const Matrix& X,
                                           const std::vector<int>& y, std::uint64_t seed,
                                           int repeats = 3, std::size_t max_eval_rows = 512);

// Per-kind constructors (defined in learner_*.cpp).
std::unique_ptr<LearnerImpl> fit_logistic_regression(const LearnerSpec&, const Matrix&,
                                                     const std::vector<int>&, std::uint64_t rng_seed);
std::unique_ptr<LearnerImpl> fit_linear_svm(const LearnerSpec&, const Matrix&,
                                            const std::vector<int>&, std::uint64_t rng_seed);
std::unique_ptr<LearnerImpl> fit_naive_bayes(const LearnerSpec&, const Matrix&,
                                             const std::vector<int>&, std::uint64_t rng_seed);
std::unique_ptr<LearnerImpl> fit_knn(const LearnerSpec&, const Matrix&, const std::vector<int>&,
                                     std::uint64_t rng_seed);
std::unique_ptr<LearnerImpl> fit_decision_tree(const LearnerSpec&, const Matrix&,
                                               const std::vector<int>&, std::uint64_t rng_seed);
std::unique_ptr<LearnerImpl> fit_forest(const LearnerSpec&, const Matrix&,
                                        const std::vector<int>&, std::uint64_t rng_seed);
std::unique_ptr<LearnerImpl> fit_gradient_boosting(const LearnerSpec&, const Matrix&,
                                                   const std::vector<int>&, std::uint64_t rng_seed);
std::unique_ptr<LearnerImpl> fit_adaboost(const LearnerSpec&, const Matrix&,
                                          const std::vector<int>&, std::uint64_t rng_seed);

// Per-kind payload loaders (used by TrainedLearner::load).
std::unique_ptr<LearnerImpl> load_learner_payload(const LearnerSpec& spec,
                                                  std::size_t feature_count, BinaryReader& r);

}  // namespace phishstack

#endif  // PHISHSTACK_LEARNER_IMPL_HPP
