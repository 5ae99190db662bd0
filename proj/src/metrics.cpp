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

#include "phishstack/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "phishstack/errors.hpp"

namespace phishstack {

ConfusionMatrix confusion(std::span<const int> y, std::span<const double> p,
                          double threshold) {
  if (y.size() != p.size()) {
    throw LengthMismatchError("confusion: label vector has " + std::to_string(y.size()) +
                              " entries but probability vector has " + std::to_string(p.size()));
  }
  if (y.empty()) {
    throw LengthMismatchError("confusion: empty input");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const bool predicted_pos = p[i] > threshold;  // strict
    if (y[i] == 1) {
      predicted_pos ? ++cm.tp : ++cm.fn;
    } else {
      predicted_pos ? ++cm.fp : ++cm.tn;
    }
  }
  return cm;
}

MetricsReport scores(const ConfusionMatrix& cm) {
  MetricsReport r;
  r.confusion = cm;
  const double total = static_cast<double>(cm.total());
  r.accuracy = static_cast<double>(cm.tp + cm.tn) / total;

  if (cm.tp + cm.fn > 0) {
    r.sensitivity = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
  } else {
    r.degenerate_sensitivity = true;
  }
  if (cm.tn + cm.fp > 0) {
    r.specificity = static_cast<double>(cm.tn) / static_cast<double>(cm.tn + cm.fp);
  } else {
    r.degenerate_specificity = true;
  }
  if (cm.tp + cm.fp > 0) {
    r.precision = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp);
  } else {
    r.degenerate_precision = true;
  }
  r.gmean = std::sqrt(r.sensitivity * r.specificity);
  if (r.precision + r.sensitivity > 0.0) {
    r.f1 = 2.0 * r.precision * r.sensitivity / (r.precision + r.sensitivity);
  } else {
    r.degenerate_f1 = true;
  }
  return r;
}

double roc_auc(std::span<const int> y, std::span<const double> p) {
  if (y.size() != p.size()) {
    throw LengthMismatchError("roc_auc: length mismatch");
  }
  std::size_t n_pos = 0;
  for (int v : y) n_pos += (v == 1);
  const std::size_t n_neg = y.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw SingleClassEvaluationError("roc_auc: needs both classes present");
  }

  // Average ranks with ties shared, then the Mann-Whitney statistic.
  std::vector<std::size_t> order(y.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });

  double pos_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && p[order[j + 1]] == p[order[i]]) ++j;
    // 1-based ranks i+1 .. j+1 share the average rank.
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j + 1);
    for (std::size_t t = i; t <= j; ++t) {
      if (y[order[t]] == 1) pos_rank_sum += avg_rank;
    }
    i = j + 1;
  }

  const double np = static_cast<double>(n_pos);
  const double nn = static_cast<double>(n_neg);
  return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

MetricsReport evaluate(std::span<const int> y, std::span<const double> p,
                       double threshold) {
  MetricsReport r = scores(confusion(y, p, threshold));
  r.threshold = threshold;
  bool has_pos = false, has_neg = false;
  for (int v : y) (v == 1 ? has_pos : has_neg) = true;
  if (has_pos && has_neg) {
    r.roc_auc = roc_auc(y, p);
    r.roc_auc_valid = true;
  }
  return r;
}

double accuracy_at(std::span<const int> y, std::span<const double> p, double threshold) {
  const ConfusionMatrix cm = confusion(y, p, threshold);
  return static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
}

}  // namespace phishstack
