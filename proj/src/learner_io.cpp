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

#include "learner_impl.hpp"

namespace phishstack {

std::unique_ptr<LearnerImpl> load_logistic_regression_payload(BinaryReader& r);
std::unique_ptr<LearnerImpl> load_linear_svm_payload(BinaryReader& r);
std::unique_ptr<LearnerImpl> load_naive_bayes_payload(BinaryReader& r);
std::unique_ptr<LearnerImpl> load_knn_payload(BinaryReader& r, int k);
std::unique_ptr<LearnerImpl> load_decision_tree_payload(BinaryReader& r);
std::unique_ptr<LearnerImpl> load_forest_payload(BinaryReader& r);
std::unique_ptr<LearnerImpl> load_gradient_boosting_payload(BinaryReader& r);
std::unique_ptr<LearnerImpl> load_adaboost_payload(BinaryReader& r);

std::unique_ptr<LearnerImpl> load_learner_payload(const LearnerSpec& spec,
                                                  std::size_t feature_count, BinaryReader& r) {
  std::unique_ptr<LearnerImpl> impl;
  switch (spec.kind) {
    case LearnerKind::LR: impl = load_logistic_regression_payload(r); break;
    case LearnerKind::NB: impl = load_naive_bayes_payload(r); break;
    case LearnerKind::KNN: impl = load_knn_payload(r, spec.hp.k_neighbors); break;
    case LearnerKind::SVM_LINEAR: impl = load_linear_svm_payload(r); break;
    case LearnerKind::DTREE: impl = load_decision_tree_payload(r); break;
    case LearnerKind::RF:
    case LearnerKind::EXTRA_TREES: impl = load_forest_payload(r); break;
    case LearnerKind::GBM: impl = load_gradient_boosting_payload(r); break;
    case LearnerKind::ADABOOST: impl = load_adaboost_payload(r); break;
  }
  impl->spec = spec;
  impl->feature_count = feature_count;
  return impl;
}

}  // namespace phishstack
