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

#ifndef PHISHSTACK_TREE_HPP
#define PHISHSTACK_TREE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "phishstack/binary_io.hpp"
#include "phishstack/matrix.hpp"
#include "phishstack/rng.hpp"

namespace phishstack {

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf payload: P(positive) or regression value

  bool is_leaf() const { return feature < 0; }
};

struct TreeParams {
  int max_depth = -1;       // -1 = unlimited
  int max_features = -1;    // -1 = all, otherwise features tried per split
  bool random_thresholds = false;  // extremely-randomized splits
  int min_samples_split = 2;
  int min_samples_leaf = 1;
};

/// Binary CART tree. Split quality is Gini impurity decrease (classification,
/// optionally sample-weighted) or squared-error decrease (regression). Split
/// ties break toward the lower feature index, then the lower threshold.
/// Samples with value <= threshold go left.
class Tree {
 public:
  std::vector<TreeNode> nodes;

  /// y in {0,1}; w may be empty (unit weights). rows selects the training
  /// subset (duplicates allowed, e.g. bootstrap samples). When
  /// importance_acc is non-null, each split adds its weighted impurity
  /// decrease to (*importance_acc)[feature].
  void fit_classification(const Matrix& X, std::span<const int> y, std::span<const double> w,
                          std::span<const int> rows, const TreeParams& params, Rng& rng,
                          std::vector<double>* importance_acc = nullptr);

  /// Least-squares regression on target. leaf_of_row, when non-null, receives
  /// the leaf node index for each entry of rows (aligned with rows).
  void fit_regression(const Matrix& X, std::span<const double> target,
                      std::span<const int> rows, const TreeParams& params, Rng& rng,
                      std::vector<double>* importance_acc = nullptr,
                      std::vector<int>* leaf_of_row = nullptr);

  double predict_row(std::span<const double> x) const;
  int leaf_index(std::span<const double> x) const;

  void save(BinaryWriter& w) const;
  static Tree load(BinaryReader& r);
};

}  // namespace phishstack

#endif  // PHISHSTACK_TREE_HPP
