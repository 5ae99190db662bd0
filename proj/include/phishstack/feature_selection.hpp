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

#ifndef PHISHSTACK_FEATURE_SELECTION_HPP
#define PHISHSTACK_FEATURE_SELECTION_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "phishstack/dataset.hpp"
#include "phishstack/learners.hpp"

namespace phishstack {

/// Per-classifier feature subset chosen by recursive elimination.
struct FeatureMask {
  LearnerKind learner_kind = LearnerKind::LR;
  std::vector<int> selected;  // strictly increasing indices into the parent dataset
  double cv_score_at_selection = 0.0;

  void validate(std::size_t d) const;

  /// Mask keeping every column (used when selection is skipped).
  static FeatureMask full(LearnerKind kind, std::size_t d);
};

/// One elimination step: the feature count that was scored, its mean CV
/// accuracy, and the features removed after scoring it.
struct RfecvRecord {
  int feature_count = 0;
  double mean_cv_accuracy = 0.0;
  std::vector<int> removed_indices;
};

struct RfecvTrace {
  std::vector<RfecvRecord> records;

  /// Plain-text table, one record per line:
  /// feature_count<TAB>mean_cv_accuracy<TAB>removed=i,j,k
  std::string to_table() const;
};

/// Recursive feature elimination with cross-validation: scores each feature
/// set by stratified k-fold mean accuracy, prunes the least-important
/// features (3 at a time while more than 40 remain, else 1), runs to the
/// single-feature floor, and returns the set with the best score (ties break
/// toward fewer features).
std::pair<FeatureMask, RfecvTrace> rfecv(const Dataset& ds, const LearnerSpec& spec, int k,
                                         std::uint64_t seed);

/// Column-subset projection of ds through the mask.
Dataset apply_mask(const Dataset& ds, const FeatureMask& mask);

/// Projection of a bare matrix through the mask (prediction path).
Matrix apply_mask(const Matrix& X, const FeatureMask& mask);

}  // namespace phishstack

#endif  // PHISHSTACK_FEATURE_SELECTION_HPP
