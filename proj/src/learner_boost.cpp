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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "learner_impl.hpp"
#include "tree.hpp"

namespace phishstack {

namespace {

/// Gradient boosting on the binomial deviance: depth-limited regression trees
/// fit to residuals y - p, leaf values by a single Newton step, shrinkage
/// applied per stage.
struct GradientBoostingImpl final : LearnerImpl {
  double initial_score = 0.0;  // log-odds prior
  double shrinkage = 0.1;
  std::vector<Tree> trees;
  std::vector<double> importances;
  std::vector<double> train_error_trace;

  double raw_score(std::span<const double> x) const {
    double f = initial_score;
    for (const Tree& t : trees) f += shrinkage * t.predict_row(x);
    return f;
  }

  void predict_proba_into(const Matrix& X, std::span<double> out) const override {
    for (std::size_t r = 0; r < X.rows(); ++r) out[r] = sigmoid(raw_score(X.row(r)));
  }
  std::vector<double> importance(const Matrix&, const std::vector<int>&,
                                 std::uint64_t) const override {
    return importances;
  }
  std::vector<double> staged_training_error() const override { return train_error_trace; }

  void save_payload(BinaryWriter& w) const override {
    w.f64(initial_score);
    w.f64(shrinkage);
    w.u64(trees.size());
    for (const Tree& t : trees) t.save(w);
    w.vec_f64(importances);
  }
  static std::unique_ptr<LearnerImpl> load(BinaryReader& r) {
    auto m = std::make_unique<GradientBoostingImpl>();
    m->initial_score = r.f64();
    m->shrinkage = r.f64();
    const std::uint64_t count = r.u64();
    m->trees.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) m->trees.push_back(Tree::load(r));
    m->importances = r.vec_f64();
    return m;
  }
};

/// SAMME AdaBoost over depth-1 stumps with weighted Gini splits.
struct AdaBoostImpl final : LearnerImpl {
  std::vector<Tree> stumps;
  std::vector<double> alphas;
  std::vector<double> importances;
  std::vector<double> train_error_trace;

  double decision(std::span<const double> x) const {
    double vote = 0.0, alpha_sum = 0.0;
    for (std::size_t t = 0; t < stumps.size(); ++t) {
      const double h = stumps[t].predict_row(x) > 0.5 ? 1.0 : -1.0;
      vote += alphas[t] * h;
      alpha_sum += alphas[t];
    }
    return alpha_sum > 0.0 ? vote / alpha_sum : 0.0;
  }

  void predict_proba_into(const Matrix& X, std::span<double> out) const override {
    for (std::size_t r = 0; r < X.rows(); ++r) out[r] = sigmoid(2.0 * decision(X.row(r)));
  }
  std::vector<double> importance(const Matrix&, const std::vector<int>&,
                                 std::uint64_t) const override {
    return importances;
  }
  std::vector<double> staged_training_error() const override { return train_error_trace; }

  void save_payload(BinaryWriter& w) const override {
    w.u64(stumps.size());
    for (const Tree& t : stumps) t.save(w);
    w.vec_f64(alphas);
    w.vec_f64(importances);
  }
  static std::unique_ptr<LearnerImpl> load(BinaryReader& r) {
    auto m = std::make_unique<AdaBoostImpl>();
    const std::uint64_t count = r.u64();
    m->stumps.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) m->stumps.push_back(Tree::load(r));
    m->alphas = r.vec_f64();
    m->importances = r.vec_f64();
    return m;
  }
};

}  // namespace

std::unique_ptr<LearnerImpl> fit_gradient_boosting(const LearnerSpec& spec, const Matrix& X,
                                                   const std::vector<int>& y,
                                                   std::uint64_t rng_seed) {
  const std::size_t n = X.rows();
  auto model = std::make_unique<GradientBoostingImpl>();
  model->shrinkage = spec.hp.learning_rate;
  model->importances.assign(X.cols(), 0.0);

  double pos_rate = 0.0;
  for (int v : y) pos_rate += v;
  pos_rate /= static_cast<double>(n);
  pos_rate = std::clamp(pos_rate, 1e-12, 1.0 - 1e-12);
  model->initial_score = std::log(pos_rate / (1.0 - pos_rate));

  std::vector<double> score(n, model->initial_score);
  std::vector<double> residual(n);
  std::vector<int> rows(n);
  std::iota(rows.begin(), rows.end(), 0);

  TreeParams params;
  params.max_depth = spec.hp.gbm_max_depth;

  Rng rng(mix_seed(rng_seed, 0x6b0));  // unused by exact full-feature splits
  std::vector<int> leaf_of_row;
  model->trees.reserve(spec.hp.boost_stages);
  model->train_error_trace.reserve(spec.hp.boost_stages);

  for (int stage = 0; stage < spec.hp.boost_stages; ++stage) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = sigmoid(score[i]);
      residual[i] = static_cast<double>(y[i]) - p;
    }

    Tree tree;
    tree.fit_regression(X, residual, rows, params, rng, &model->importances, &leaf_of_row);

    // Newton step per leaf: sum(residual) / sum(p * (1 - p)).
    std::vector<double> num(tree.nodes.size(), 0.0), den(tree.nodes.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const int leaf = leaf_of_row[i];
      const double p = sigmoid(score[i]);
      num[leaf] += residual[i];
      den[leaf] += p * (1.0 - p);
    }
    for (std::size_t node = 0; node < tree.nodes.size(); ++node) {
      if (tree.nodes[node].is_leaf()) {
        tree.nodes[node].value = num[node] / std::max(den[node], 1e-12);
      }
    }

    std::size_t mistakes = 0;
    for (std::size_t i = 0; i < n; ++i) {
      score[i] += model->shrinkage * tree.nodes[leaf_of_row[i]].value;
      const bool predicted_pos = sigmoid(score[i]) > 0.5;
      mistakes += (predicted_pos != (y[i] == 1));
    }
    model->train_error_trace.push_back(static_cast<double>(mistakes) /
                                       static_cast<double>(n));
    model->trees.push_back(std::move(tree));
  }
  return model;
}

std::unique_ptr<LearnerImpl> fit_adaboost(const LearnerSpec& spec, const Matrix& X,
                                          const std::vector<int>& y, std::uint64_t rng_seed) {
  const std::size_t n = X.rows();
  auto model = std::make_unique<AdaBoostImpl>();
  model->importances.assign(X.cols(), 0.0);

  std::vector<double> weights(n, 1.0 / static_cast<double>(n));
  std::vector<int> rows(n);
  std::iota(rows.begin(), rows.end(), 0);

  TreeParams params;
  params.max_depth = 1;

  Rng rng(mix_seed(rng_seed, 0xada));
  std::vector<double> stump_importance(X.cols());
  std::vector<double> votes(n, 0.0);
  std::vector<char> h(n);

  for (int stage = 0; stage < spec.hp.stump_count; ++stage) {
    std::fill(stump_importance.begin(), stump_importance.end(), 0.0);
    Tree stump;
    stump.fit_classification(X, y, weights, rows, params, rng, &stump_importance);

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      h[i] = stump.predict_row(X.row(i)) > 0.5;
      if ((h[i] != 0) != (y[i] == 1)) err += weights[i];
    }

    if (err >= 0.5) {
      if (model->stumps.empty()) {
        // Degenerate data: keep one stump with a nominal weight.
        model->stumps.push_back(std::move(stump));
        model->alphas.push_back(1e-3);
      }
      break;
    }
    const double clamped = std::max(err, 1e-10);
    const double alpha = std::log((1.0 - clamped) / clamped);

    for (std::size_t c = 0; c < X.cols(); ++c) {
      model->importances[c] += alpha * stump_importance[c];
    }

    double weight_sum = 0.0;
    std::size_t mistakes = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if ((h[i] != 0) != (y[i] == 1)) weights[i] *= std::exp(alpha);
      weight_sum += weights[i];
      votes[i] += alpha * (h[i] ? 1.0 : -1.0);
    }
    for (std::size_t i = 0; i < n; ++i) {
      weights[i] /= weight_sum;
      const bool predicted_pos = votes[i] > 0.0;
      mistakes += (predicted_pos != (y[i] == 1));
    }
    model->train_error_trace.push_back(static_cast<double>(mistakes) /
                                       static_cast<double>(n));

    model->stumps.push_back(std::move(stump));
    model->alphas.push_back(alpha);
    if (err <= 1e-10) break;  // perfect stump; further rounds are no-ops
  }
  return model;
}

std::unique_ptr<LearnerImpl> load_gradient_boosting_payload(BinaryReader& r) {
  return GradientBoostingImpl::load(r);
}
std::unique_ptr<LearnerImpl> load_adaboost_payload(BinaryReader& r) {
  return AdaBoostImpl::load(r);
}

}  // namespace phishstack
