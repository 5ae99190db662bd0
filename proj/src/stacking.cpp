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

#include "phishstack/stacking.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "phishstack/errors.hpp"
#include "phishstack/metrics.hpp"
#include "phishstack/parallel.hpp"
#include "phishstack/rng.hpp"

namespace phishstack {

namespace {

// Stable per-column fit salt: depends on the fold and the learner kind only,
// so a candidate's OOF column is identical no matter which pool it sits in.
std::uint64_t column_salt(int fold, LearnerKind kind) {
  return mix_seed(0x00f, static_cast<std::uint64_t>(fold),
                  static_cast<std::uint64_t>(static_cast<int>(kind)));
}

constexpr double kGreedyEpsilon = 1e-4;

}  // namespace

std::size_t MetaFeatures::leakage_violations() const {
  std::size_t violations = 0;
  for (std::size_t i = 0; i < fold_provenance.size(); ++i) {
    const auto& rows = fold_train_rows[fold_provenance[i]];
    if (std::binary_search(rows.begin(), rows.end(), static_cast<int>(i))) ++violations;
  }
  return violations;
}

MetaFeatures oof_probabilities(const Dataset& train, const std::vector<PoolMember>& pool,
                               int k, std::uint64_t seed) {
  if (pool.empty()) throw Error("oof_probabilities: empty pool");
  if (k < 2) throw Error("oof_probabilities: k must be >= 2");
  const std::size_t n = train.n();

  MetaFeatures meta;
  meta.plan = stratified_kfold(train, k, mix_seed(seed, 0x00f));
  meta.column_specs = pool;
  meta.fold_provenance = meta.plan.assignment;
  meta.probs = Matrix(n, pool.size());
  meta.fold_train_rows.resize(k);

  std::vector<std::vector<int>> fold_test_rows(k);
  for (std::size_t i = 0; i < n; ++i) {
    const int f = meta.plan.assignment[i];
    for (int g = 0; g < k; ++g) {
      (g == f ? fold_test_rows[g] : meta.fold_train_rows[g]).push_back(static_cast<int>(i));
    }
  }

  // One work item per (fold, pool member); outputs land in disjoint slots.
  parallel_for(static_cast<std::size_t>(k) * pool.size(), [&](std::size_t item) {
    const int f = static_cast<int>(item / pool.size());
    const std::size_t m = item % pool.size();
    const PoolMember& member = pool[m];

    const auto& train_rows = meta.fold_train_rows[f];
    const auto& test_rows = fold_test_rows[f];

    const Matrix masked = train.features.take_cols(member.mask.selected);
    const Matrix fit_X = masked.take_rows(train_rows);
    std::vector<int> fit_y;
    fit_y.reserve(train_rows.size());
    for (int r : train_rows) fit_y.push_back(train.labels[r]);

    const TrainedLearner model = fit(member.spec, fit_X, fit_y, column_salt(f, member.spec.kind));
    const std::vector<double> p = model.predict_proba(masked.take_rows(test_rows));
    for (std::size_t i = 0; i < test_rows.size(); ++i) {
      meta.probs(test_rows[i], m) = p[i];
    }
  });

  if (const std::size_t violations = meta.leakage_violations(); violations > 0) {
    throw std::logic_error("oof_probabilities: leakage audit found " +
                           std::to_string(violations) + " violations");
  }
  return meta;
}

namespace {

// Accuracy of the meta-learner trained on the subset's OOF columns under a
// fixed stratified 80/20 holdout. The split and the meta seed stay constant
// so subset scores are comparable.
class StackedScorer {
 public:
  StackedScorer(const MetaFeatures& meta, const std::vector<int>& labels,
                const MlpConfig& meta_config, std::uint64_t seed)
      : meta_(meta), config_(meta_config) {
    config_.seed = mix_seed(seed, 0x57ac);
    Rng rng(mix_seed(seed, 0x8041));
    std::vector<int> pos_rows, neg_rows;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      (labels[i] == 1 ? pos_rows : neg_rows).push_back(static_cast<int>(i));
    }
    rng.shuffle(std::span<int>(pos_rows));
    rng.shuffle(std::span<int>(neg_rows));
    auto deal = [this](const std::vector<int>& rows) {
      const std::size_t held = rows.size() / 5;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        (i < held ? holdout_rows_ : train_rows_).push_back(rows[i]);
      }
    };
    deal(pos_rows);
    deal(neg_rows);
    std::sort(train_rows_.begin(), train_rows_.end());
    std::sort(holdout_rows_.begin(), holdout_rows_.end());
    for (int r : train_rows_) train_y_.push_back(labels[r]);
    for (int r : holdout_rows_) holdout_y_.push_back(labels[r]);
  }

  double score(const std::vector<std::size_t>& subset) const {
    std::vector<int> cols(subset.begin(), subset.end());
    const Matrix all = meta_.probs.take_cols(cols);
    const MlpModel model = mlp_fit(config_, all.take_rows(train_rows_), train_y_);
    const std::vector<double> p = mlp_predict(model, all.take_rows(holdout_rows_));
    return accuracy_at(holdout_y_, p);
  }

 private:
  const MetaFeatures& meta_;
  MlpConfig config_;
  std::vector<int> train_rows_, holdout_rows_;
  std::vector<int> train_y_, holdout_y_;
};

}  // namespace

GreedySelection greedy_select(const Dataset& train, const std::vector<PoolMember>& candidates,
                              int k, std::uint64_t seed, const MlpConfig& meta_config) {
  if (candidates.empty()) throw Error("greedy_select: no candidates");

  // OOF columns computed once; greedy rounds only refit the meta-learner.
  const MetaFeatures meta = oof_probabilities(train, candidates, k, seed);

  GreedySelection result;
  result.standalone_cv.resize(candidates.size());
  std::vector<double> column(train.n());
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    for (std::size_t i = 0; i < train.n(); ++i) column[i] = meta.probs(i, c);
    result.standalone_cv[c] = accuracy_at(train.labels, column);
  }

  // Higher CV accuracy first; ties toward the canonical kind order, then
  // list position.
  auto candidate_precedes = [&](std::size_t a, std::size_t b, double score_a, double score_b) {
    if (score_a != score_b) return score_a > score_b;
    const int ka = static_cast<int>(candidates[a].spec.kind);
    const int kb = static_cast<int>(candidates[b].spec.kind);
    if (ka != kb) return ka < kb;
    return a < b;
  };

  std::size_t best_start = 0;
  for (std::size_t c = 1; c < candidates.size(); ++c) {
    if (candidate_precedes(c, best_start, result.standalone_cv[c],
                           result.standalone_cv[best_start])) {
      best_start = c;
    }
  }

  const StackedScorer scorer(meta, train.labels, meta_config, seed);
  result.selected.push_back(best_start);
  double current = scorer.score(result.selected);
  result.score_trace.push_back(current);

  std::vector<std::size_t> remaining;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (c != best_start) remaining.push_back(c);
  }

  while (!remaining.empty()) {
    std::vector<double> trial_scores(remaining.size());
    parallel_for(remaining.size(), [&](std::size_t i) {
      std::vector<std::size_t> trial = result.selected;
      trial.push_back(remaining[i]);
      trial_scores[i] = scorer.score(trial);
    });

    std::size_t best_i = 0;
    for (std::size_t i = 1; i < remaining.size(); ++i) {
      if (candidate_precedes(remaining[i], remaining[best_i], trial_scores[i],
                             trial_scores[best_i])) {
        best_i = i;
      }
    }
    if (trial_scores[best_i] - current <= kGreedyEpsilon) break;

    current = trial_scores[best_i];
    result.selected.push_back(remaining[best_i]);
    result.score_trace.push_back(current);
    remaining.erase(remaining.begin() + best_i);
  }
  return result;
}

StackModel fit_stack(const Dataset& train, const std::vector<PoolMember>& selected, int k,
                     std::uint64_t seed, const MlpConfig& meta_config) {
  if (selected.empty()) throw Error("fit_stack: empty selection");
  const MetaFeatures meta = oof_probabilities(train, selected, k, seed);

  StackModel model;
  model.bases = selected;
  model.k_inner = k;
  model.seed = seed;
  model.n_features_full = train.d();
  model.meta_config = meta_config;
  model.meta_config.seed = mix_seed(seed, 0x3e7a);
  model.meta = mlp_fit(model.meta_config, meta.probs, train.labels);

  model.fitted_bases.resize(selected.size());
  parallel_for(selected.size(), [&](std::size_t m) {
    const PoolMember& member = selected[m];
    const Matrix masked = train.features.take_cols(member.mask.selected);
    model.fitted_bases[m] =
        fit(member.spec, masked, train.labels,
            mix_seed(0xf17, static_cast<std::uint64_t>(static_cast<int>(member.spec.kind))));
  });
  return model;
}

std::vector<double> predict_stack(const StackModel& model, const Matrix& X) {
  if (X.cols() != model.n_features_full) {
    throw DimensionMismatchError("predict_stack: expected " +
                                 std::to_string(model.n_features_full) + " columns, got " +
                                 std::to_string(X.cols()));
  }
  const std::size_t q = X.rows();
  Matrix meta_in(q, model.bases.size());
  for (std::size_t m = 0; m < model.bases.size(); ++m) {
    const Matrix masked = X.take_cols(model.bases[m].mask.selected);
    const std::vector<double> p = model.fitted_bases[m].predict_proba(masked);
    for (std::size_t r = 0; r < q; ++r) meta_in(r, m) = p[r];
  }
  return mlp_predict(model.meta, meta_in);
}

}  // namespace phishstack
