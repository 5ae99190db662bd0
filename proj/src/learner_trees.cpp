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

#include <cmath>
#include <numeric>

#include "learner_impl.hpp"
#include "phishstack/parallel.hpp"
#include "tree.hpp"

namespace phishstack {

namespace {

struct DecisionTreeImpl final : LearnerImpl {
  Tree tree;
  std::vector<double> importances;

  void predict_proba_into(const Matrix& X, std::span<double> out) const override {
    for (std::size_t r = 0; r < X.rows(); ++r) out[r] = tree.predict_row(X.row(r));
  }
  std::vector<double> importance(const Matrix&, const std::vector<int>&,
                                 std::uint64_t) const override {
    return importances;
  }
  void save_payload(BinaryWriter& w) const override {
    tree.save(w);
    w.vec_f64(importances);
  }
  static std::unique_ptr<LearnerImpl> load(BinaryReader& r) {
    auto m = std::make_unique<DecisionTreeImpl>();
    m->tree = Tree::load(r);
    m->importances = r.vec_f64();
    return m;
  }
};

/// Bagged (RF) or extremely-randomized (ET) tree ensemble; prediction is the
/// mean of per-tree leaf probabilities.
struct ForestImpl final : LearnerImpl {
  std::vector<Tree> trees;
  std::vector<double> importances;

  void predict_proba_into(const Matrix& X, std::span<double> out) const override {
    for (std::size_t r = 0; r < X.rows(); ++r) {
      const auto x = X.row(r);
      double acc = 0.0;
      for (const Tree& t : trees) acc += t.predict_row(x);
      out[r] = acc / static_cast<double>(trees.size());
    }
  }
  std::vector<double> importance(const Matrix&, const std::vector<int>&,
                                 std::uint64_t) const override {
    return importances;
  }
  void save_payload(BinaryWriter& w) const override {
    w.u64(trees.size());
    for (const Tree& t : trees) t.save(w);
    w.vec_f64(importances);
  }
  static std::unique_ptr<LearnerImpl> load(BinaryReader& r) {
    auto m = std::make_unique<ForestImpl>();
    const std::uint64_t count = r.u64();
    m->trees.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) m->trees.push_back(Tree::load(r));
    m->importances = r.vec_f64();
    return m;
  }
};

}  // namespace

std::unique_ptr<LearnerImpl> fit_decision_tree(const LearnerSpec&, const Matrix& X,
                                               const std::vector<int>& y,
                                               std::uint64_t rng_seed) {
  auto model = std::make_unique<DecisionTreeImpl>();
  model->importances.assign(X.cols(), 0.0);

  std::vector<int> rows(X.rows());
  std::iota(rows.begin(), rows.end(), 0);
  TreeParams params;  // all features, exact splits, unlimited depth
  Rng rng(rng_seed);
  model->tree.fit_classification(X, y, {}, rows, params, rng, &model->importances);
  return model;
}

std::unique_ptr<LearnerImpl> fit_forest(const LearnerSpec& spec, const Matrix& X,
                                        const std::vector<int>& y, std::uint64_t rng_seed) {
  const bool extra = spec.kind == LearnerKind::EXTRA_TREES;
  const std::size_t n = X.rows();
  const int tree_count = spec.hp.tree_count;

  TreeParams params;
  params.max_features =
      std::max(1, static_cast<int>(std::sqrt(static_cast<double>(X.cols()))));
  params.random_thresholds = extra;

  auto model = std::make_unique<ForestImpl>();
  model->trees.resize(tree_count);
  std::vector<std::vector<double>> tree_importances(tree_count);

  parallel_for(tree_count, [&](std::size_t t) {
    Rng rng(mix_seed(rng_seed, 0x7e3e5, t));
    tree_importances[t].assign(X.cols(), 0.0);
    std::vector<int> rows(n);
    if (extra) {
      std::iota(rows.begin(), rows.end(), 0);  // no bootstrap for ET
    } else {
      for (std::size_t i = 0; i < n; ++i) rows[i] = static_cast<int>(rng.uniform_int(n));
    }
    model->trees[t].fit_classification(X, y, {}, rows, params, rng, &tree_importances[t]);
  });

  model->importances.assign(X.cols(), 0.0);
  for (const auto& imp : tree_importances) {
    for (std::size_t c = 0; c < imp.size(); ++c) model->importances[c] += imp[c];
  }
  return model;
}

std::unique_ptr<LearnerImpl> load_decision_tree_payload(BinaryReader& r) {
  return DecisionTreeImpl::load(r);
}
std::unique_ptr<LearnerImpl> load_forest_payload(BinaryReader& r) {
  return ForestImpl::load(r);
}

}  // namespace phishstack
