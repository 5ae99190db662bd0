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

#ifndef PHISHSTACK_METRICS_HPP
#define PHISHSTACK_METRICS_HPP

#include <cstdint>
#include <span>

namespace phishstack {

struct ConfusionMatrix {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t fn = 0;

  std::int64_t total() const { return tp + fp + tn + fn; }
  bool operator==(const ConfusionMatrix&) const = default;
};

/// The six evaluation scores plus the confusion counts they derive from.
/// Degenerate denominators (e.g. no predicted positives) yield 0.0 and set
/// the matching flag instead of throwing, so fold averaging never aborts.
struct MetricsReport {
  double accuracy = 0.0;
  double sensitivity = 0.0;   // recall on the phishing class
  double precision = 0.0;
  double specificity = 0.0;
  double gmean = 0.0;
  double f1 = 0.0;
  double roc_auc = 0.0;
  ConfusionMatrix confusion;
  double threshold = 0.5;

  bool degenerate_sensitivity = false;
  bool degenerate_precision = false;
  bool degenerate_specificity = false;
  bool degenerate_f1 = false;
  bool roc_auc_valid = false;
};

/// Tallies the confusion matrix under the strict decision rule: predict
/// phishing iff p > threshold.
ConfusionMatrix confusion(std::span<const int> y, std::span<const double> p,
                          double threshold = 0.5);

/// Fills every field derivable from the confusion matrix (all but roc_auc).
MetricsReport scores(const ConfusionMatrix& cm);

/// Probability that a random positive outranks a random negative; ties count
/// one half (rank / Mann-Whitney formulation). Requires both classes.
double roc_auc(std::span<const int> y, std::span<const double> p);

/// scores() plus roc_auc() in one report.
MetricsReport evaluate(std::span<const int> y, std::span<const double> p,
                       double threshold = 0.5);

/// Fraction of correct predictions under the strict threshold rule.
double accuracy_at(std::span<const int> y, std::span<const double> p,
                   double threshold = 0.5);

}  // namespace phishstack

#endif  // PHISHSTACK_METRICS_HPP
