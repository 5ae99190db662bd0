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

#ifndef PHISHSTACK_DATASET_HPP
#define PHISHSTACK_DATASET_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "phishstack/matrix.hpp"

namespace phishstack {

/// Column layout of a source CSV plus the raw-to-{0,1} label mapping.
/// Phishing is always the positive class (1); the raw encoding of that class
/// differs per source file, so it lives here, never in code.
struct DatasetSchema {
  std::vector<std::string> feature_columns;
  std::string label_column;
  std::string positive_label_value;  // raw value meaning "phishing"
  std::string negative_label_value;  // raw value meaning "legitimate"

  // Optional cross-check against the published class counts; a mismatch
  // produces a warning at load time, not an error.
  std::optional<std::int64_t> expected_positive_count;
  std::optional<std::int64_t> expected_negative_count;

  void validate() const;

  /// Stable hash of the column layout and label mapping; stored in model
  /// files so a model cannot be applied to data with a different schema.
  std::uint64_t hash() const;

  /// Parses the plain-text key-value schema format:
  ///   label_column = Result
  ///   positive_label_value = -1
  ///   negative_label_value = 1
  ///   expected_positive_count = 4898      (optional)
  ///   feature_columns = col_a, col_b, ...  (may repeat; lists concatenate)
  /// '#' starts a comment; blank lines are ignored.
  static DatasetSchema load(const std::string& path);
};

/// Immutable feature matrix with binary labels (1 = phishing).
struct Dataset {
  Matrix features;
  std::vector<int> labels;
  std::vector<std::string> feature_names;
  std::string provenance;

  std::size_t n() const { return features.rows(); }
  std::size_t d() const { return features.cols(); }

  /// Checks finiteness, label domain, both classes present, and shape
  /// consistency; throws Error on violation.
  void validate() const;
};

/// Stratified fold assignment over a dataset's rows.
struct FoldPlan {
  int k = 0;
  std::vector<int> assignment;  // per-row fold index in [0, k)
  std::uint64_t seed = 0;
};

/// Loads a header-row, comma-separated, UTF-8 CSV through a schema. Rows keep
/// file order; columns follow schema.feature_columns. Warnings (e.g. class
/// counts differing from the expected ones) are appended to *warnings when
/// provided.
Dataset load_csv(const std::string& path, const DatasetSchema& schema,
                 std::vector<std::string>* warnings = nullptr);

/// Deterministic stratified k-fold assignment: fold sizes differ by at most
/// one, per-fold positive counts differ by at most one.
FoldPlan stratified_kfold(const Dataset& ds, int k, std::uint64_t seed);

/// Same assignment computed from a bare label vector (used wherever folds are
/// needed over derived matrices, e.g. meta-features).
FoldPlan stratified_kfold_labels(std::span<const int> labels, int k, std::uint64_t seed);

/// Partitions ds into (train, test) where test holds exactly the rows of
/// test_fold. Row order within each part follows the original dataset.
std::pair<Dataset, Dataset> split_by_fold(const Dataset& ds, const FoldPlan& plan,
                                          int test_fold);

}  // namespace phishstack

#endif  // PHISHSTACK_DATASET_HPP
