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

#include "phishstack/feature_selection.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "phishstack/errors.hpp"
#include "phishstack/metrics.hpp"
#include "phishstack/parallel.hpp"
#include "phishstack/rng.hpp"

namespace phishstack {

void FeatureMask::validate(std::size_t d) const {
  if (selected.empty()) throw Error("feature mask: empty selection");
  for (std::size_t i = 0; i < selected.size(); ++i) {
    if (selected[i] < 0 || static_cast<std::size_t>(selected[i]) >= d) {
      throw IndexOutOfRangeError("feature mask: index " + std::to_string(selected[i]) +
                                 " outside [0, " + std::to_string(d) + ")");
    }
    if (i > 0 && selected[i] <= selected[i - 1]) {
      throw Error("feature mask: indices must be strictly increasing");
    }
  }
  if (cv_score_at_selection < 0.0 || cv_score_at_selection > 1.0) {
    throw Error("feature mask: cv score outside [0,1]");
  }
}

FeatureMask FeatureMask::full(LearnerKind kind, std::size_t d) {
  FeatureMask mask;
  mask.learner_kind = kind;
  mask.selected.resize(d);
  std::iota(mask.selected.begin(), mask.selected.end(), 0);
  return mask;
}

std::string RfecvTrace::to_table() const {
  std::string out;
  char line[64];
  for (const RfecvRecord& rec : records) {
    std::snprintf(line, sizeof(line), "%d\t%.6f\tremoved=", rec.feature_count,
                  rec.mean_cv_accuracy);
    out += line;
    for (std::size_t i = 0; i < rec.removed_indices.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(rec.removed_indices[i]);
    }
    out += '\n';
  }
  return out;
}

namespace {

// Mean stratified k-fold accuracy of spec on the column subset. Fold fits run
// concurrently when a worker pool is available.
double score_subset(const Dataset& ds, const std::vector<int>& columns,
                    const LearnerSpec& spec, const FoldPlan& plan, std::uint64_t seed,
                    int iteration) {
  const Matrix sub = ds.features.take_cols(columns);
  std::vector<double> fold_acc(plan.k, 0.0);
  parallel_for(plan.k, [&](std::size_t f) {
    std::vector<int> train_rows, test_rows;
    for (std::size_t i = 0; i < plan.assignment.size(); ++i) {
      (plan.assignment[i] == static_cast<int>(f) ? test_rows : train_rows)
          .push_back(static_cast<int>(i));
    }
    const Matrix train_X = sub.take_rows(train_rows);
    const Matrix test_X = sub.take_rows(test_rows);
    std::vector<int> train_y, test_y;
    train_y.reserve(train_rows.size());
    test_y.reserve(test_rows.size());
    for (int r : train_rows) train_y.push_back(ds.labels[r]);
    for (int r : test_rows) test_y.push_back(ds.labels[r]);

    const TrainedLearner model =
        fit(spec, train_X, train_y, mix_seed(seed, iteration, f));
    fold_acc[f] = accuracy_at(test_y, model.predict_proba(test_X));
  });
  double total = 0.0;
  for (double a : fold_acc) total += a;
  return total / plan.k;
}

}  // namespace

std::pair<FeatureMask, RfecvTrace> rfecv(const Dataset& ds, const LearnerSpec& spec, int k,
                                         std::uint64_t seed) {
  ds.validate();
  if (k < 2) throw Error("rfecv: k must be >= 2");
  const std::size_t d = ds.d();

  // One fold plan reused across iterations: scores stay comparable and the
  // elimination path is deterministic.
  const FoldPlan plan = stratified_kfold(ds, k, mix_seed(seed, 0xfec));

  std::vector<int> current(d);
  std::iota(current.begin(), current.end(), 0);

  RfecvTrace trace;
  std::vector<std::vector<int>> sets_by_record;
  int iteration = 0;
  while (true) {
    RfecvRecord rec;
    rec.feature_count = static_cast<int>(current.size());
    rec.mean_cv_accuracy = score_subset(ds, current, spec, plan, seed, iteration);
    sets_by_record.push_back(current);

    if (current.size() == 1) {
      trace.records.push_back(std::move(rec));
      break;
    }

    // Fit on the full current set and rank columns by importance.
    const Matrix sub = ds.features.take_cols(current);
    const TrainedLearner model =
        fit(spec, sub, ds.labels, mix_seed(seed, 0x1a9, iteration));
    const std::vector<double> importance =
        model.feature_importance(sub, ds.labels, mix_seed(seed, 0x1ab, iteration));

    int step = current.size() > 40 ? 3 : 1;
    step = std::min<int>(step, static_cast<int>(current.size()) - 1);

    // Least important first; equal importances drop the lower dataset index.
    std::vector<int> order(current.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (importance[a] != importance[b]) return importance[a] < importance[b];
      return current[a] < current[b];
    });

    std::vector<int> removed;
    removed.reserve(step);
    for (int i = 0; i < step; ++i) removed.push_back(current[order[i]]);
    std::sort(removed.begin(), removed.end());
    rec.removed_indices = removed;
    trace.records.push_back(std::move(rec));

    std::vector<int> next;
    next.reserve(current.size() - step);
    std::set_difference(current.begin(), current.end(), removed.begin(), removed.end(),
                        std::back_inserter(next));
    current = std::move(next);
    ++iteration;
  }

  // Best mean accuracy wins; ties go to the later (smaller) record.
  std::size_t best = 0;
  for (std::size_t i = 1; i < trace.records.size(); ++i) {
    if (trace.records[i].mean_cv_accuracy >= trace.records[best].mean_cv_accuracy) best = i;
  }

  FeatureMask mask;
  mask.learner_kind = spec.kind;
  mask.selected = sets_by_record[best];
  mask.cv_score_at_selection = trace.records[best].mean_cv_accuracy;
  mask.validate(d);
  return {std::move(mask), std::move(trace)};
}

Dataset apply_mask(const Dataset& ds, const FeatureMask& mask) {
  mask.validate(ds.d());
  Dataset out;
  out.features = ds.features.take_cols(mask.selected);
  out.labels = ds.labels;
  out.provenance = ds.provenance;
  out.feature_names.reserve(mask.selected.size());
  for (int c : mask.selected) out.feature_names.push_back(ds.feature_names[c]);
  return out;
}

Matrix apply_mask(const Matrix& X, const FeatureMask& mask) {
  mask.validate(X.cols());
  return X.take_cols(mask.selected);
}

}  // namespace phishstack
