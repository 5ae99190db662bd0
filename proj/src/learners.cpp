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

#include "phishstack/learners.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "learner_impl.hpp"
#include "phishstack/errors.hpp"
#include "phishstack/metrics.hpp"
#include "phishstack/rng.hpp"

namespace phishstack {

const char* kind_name(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::LR: return "LR";
    case LearnerKind::NB: return "NB";
    case LearnerKind::KNN: return "KNN";
    case LearnerKind::SVM_LINEAR: return "SVM_LINEAR";
    case LearnerKind::DTREE: return "DTREE";
    case LearnerKind::RF: return "RF";
    case LearnerKind::EXTRA_TREES: return "EXTRA_TREES";
    case LearnerKind::GBM: return "GBM";
    case LearnerKind::ADABOOST: return "ADABOOST";
  }
  throw Error("unknown learner kind");
}

LearnerKind kind_from_name(std::string_view name) {
  for (LearnerKind kind : kAllLearnerKinds) {
    if (name == kind_name(kind)) return kind;
  }
  throw ConfigError("unknown learner kind \"" + std::string(name) + "\"");
}

void Hyperparams::validate(LearnerKind kind) const {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError("hyperparams: " + msg);
  };
  switch (kind) {
    case LearnerKind::RF:
    case LearnerKind::EXTRA_TREES:
      require(tree_count >= 1, "tree_count must be >= 1");
      break;
    case LearnerKind::GBM:
      require(boost_stages >= 1, "boost_stages must be >= 1");
      require(learning_rate > 0.0, "learning_rate must be > 0");
      require(gbm_max_depth >= 1, "gbm_max_depth must be >= 1");
      break;
    case LearnerKind::ADABOOST:
      require(stump_count >= 1, "stump_count must be >= 1");
      break;
    case LearnerKind::KNN:
      require(k_neighbors >= 1, "k_neighbors must be >= 1");
      break;
    case LearnerKind::LR:
      require(lr_l2_penalty >= 0.0, "lr_l2_penalty must be >= 0");
      require(lr_max_epochs >= 1, "lr_max_epochs must be >= 1");
      require(lr_grad_tol > 0.0, "lr_grad_tol must be > 0");
      break;
    case LearnerKind::SVM_LINEAR:
      require(svm_regularization > 0.0, "svm_regularization must be > 0");
      require(svm_epochs >= 1, "svm_epochs must be >= 1");
      break;
    case LearnerKind::NB:
      require(nb_variance_floor > 0.0, "nb_variance_floor must be > 0");
      break;
    case LearnerKind::DTREE:
      break;
  }
}

namespace {
using FieldPtr = double Hyperparams::*;
struct Field {
  const char* name;
  bool integral;
  double Hyperparams::* dptr;
  int Hyperparams::* iptr;
};
const std::vector<Field>& fields() {
  static const std::vector<Field> f = {
      {"tree_count", true, nullptr, &Hyperparams::tree_count},
      {"boost_stages", true, nullptr, &Hyperparams::boost_stages},
      {"learning_rate", false, &Hyperparams::learning_rate, nullptr},
      {"gbm_max_depth", true, nullptr, &Hyperparams::gbm_max_depth},
      {"stump_count", true, nullptr, &Hyperparams::stump_count},
      {"k_neighbors", true, nullptr, &Hyperparams::k_neighbors},
      {"lr_l2_penalty", false, &Hyperparams::lr_l2_penalty, nullptr},
      {"lr_max_epochs", true, nullptr, &Hyperparams::lr_max_epochs},
      {"lr_grad_tol", false, &Hyperparams::lr_grad_tol, nullptr},
      {"svm_regularization", false, &Hyperparams::svm_regularization, nullptr},
      {"svm_epochs", true, nullptr, &Hyperparams::svm_epochs},
      {"nb_variance_floor", false, &Hyperparams::nb_variance_floor, nullptr},
  };
  return f;
}
}  // namespace

double Hyperparams::get(const std::string& name) const {
  for (const auto& f : fields()) {
    if (name == f.name) return f.integral ? static_cast<double>(this->*f.iptr) : this->*f.dptr;
  }
  throw ConfigError("unknown hyperparameter \"" + name + "\"");
}

void Hyperparams::set(const std::string& name, double value) {
  for (const auto& f : fields()) {
    if (name == f.name) {
      if (f.integral) {
        this->*f.iptr = static_cast<int>(value);
      } else {
        this->*f.dptr = value;
      }
      return;
    }
  }
  throw ConfigError("unknown hyperparameter \"" + name + "\"");
}

const std::vector<std::string>& Hyperparams::field_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& f : fields()) out.push_back(f.name);
    return out;
  }();
  return names;
}

void MinMaxScaler::fit(const Matrix& X) {
  const std::size_t d = X.cols();
  lo.assign(d, 0.0);
  inv_range.assign(d, 0.0);
  if (X.rows() == 0) return;
  std::vector<double> hi(d);
  for (std::size_t c = 0; c < d; ++c) lo[c] = hi[c] = X(0, c);
  for (std::size_t r = 1; r < X.rows(); ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      const double v = X(r, c);
      lo[c] = std::min(lo[c], v);
      hi[c] = std::max(hi[c], v);
    }
  }
  for (std::size_t c = 0; c < d; ++c) {
    const double range = hi[c] - lo[c];
    inv_range[c] = range > 0.0 ? 1.0 / range : 0.0;
  }
}

Matrix MinMaxScaler::transform(const Matrix& X) const {
  Matrix out(X.rows(), X.cols());
  for (std::size_t r = 0; r < X.rows(); ++r) {
    for (std::size_t c = 0; c < X.cols(); ++c) {
      out(r, c) = (X(r, c) - lo[c]) * inv_range[c];
    }
  }
  return out;
}

void MinMaxScaler::save(BinaryWriter& w) const {
  w.vec_f64(lo);
  w.vec_f64(inv_range);
}

MinMaxScaler MinMaxScaler::load(BinaryReader& r) {
  MinMaxScaler s;
  s.lo = r.vec_f64();
  s.inv_range = r.vec_f64();
  return s;
}

std::vector<double> LearnerImpl::importance(const Matrix& X, const std::vector<int>& y,
                                            std::uint64_t seed) const {
  return permutation_importance(*this, X, y, seed);
}

std::vector<double> permutation_importance(const LearnerImpl& model, const Matrix& X,
                                           const std::vector<int>& y, std::uint64_t seed,
                                           int repeats, std::size_t max_eval_rows) {
  const std::size_t n = X.rows();
  const std::size_t d = X.cols();
  Rng rng(mix_seed(seed, 0x9e47));

  // Seeded subsample of evaluation rows; full set when small enough.
  std::vector<int> eval_rows(n);
  for (std::size_t i = 0; i < n; ++i) eval_rows[i] = static_cast<int>(i);
  if (n > max_eval_rows) {
    rng.shuffle(std::span<int>(eval_rows));
    eval_rows.resize(max_eval_rows);
    std::sort(eval_rows.begin(), eval_rows.end());
  }

  Matrix eval = X.take_rows(eval_rows);
  std::vector<int> eval_y(eval_rows.size());
  for (std::size_t i = 0; i < eval_rows.size(); ++i) eval_y[i] = y[eval_rows[i]];

  std::vector<double> probs(eval.rows());
  model.predict_proba_into(eval, probs);
  const double base_acc = accuracy_at(eval_y, probs);

  std::vector<double> result(d, 0.0);
  std::vector<double> saved(eval.rows());
  std::vector<int> perm(eval.rows());
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t r = 0; r < eval.rows(); ++r) saved[r] = eval(r, c);
    double drop_sum = 0.0;
    for (int rep = 0; rep < repeats; ++rep) {
      for (std::size_t r = 0; r < eval.rows(); ++r) perm[r] = static_cast<int>(r);
      rng.shuffle(std::span<int>(perm));
      for (std::size_t r = 0; r < eval.rows(); ++r) eval(r, c) = saved[perm[r]];
      model.predict_proba_into(eval, probs);
      drop_sum += base_acc - accuracy_at(eval_y, probs);
    }
    for (std::size_t r = 0; r < eval.rows(); ++r) eval(r, c) = saved[r];
    result[c] = std::max(0.0, drop_sum / repeats);
  }
  return result;
}

const LearnerSpec& TrainedLearner::spec() const { return impl_->spec; }

std::size_t TrainedLearner::trained_feature_count() const { return impl_->feature_count; }

std::vector<double> TrainedLearner::predict_proba(const Matrix& X) const {
  if (X.cols() != impl_->feature_count) {
    throw DimensionMismatchError("predict_proba: model was trained on " +
                                 std::to_string(impl_->feature_count) + " features, input has " +
                                 std::to_string(X.cols()));
  }
  std::vector<double> out(X.rows());
  impl_->predict_proba_into(X, out);
  return out;
}

std::vector<double> TrainedLearner::feature_importance(const Matrix& X,
                                                       const std::vector<int>& y,
                                                       std::uint64_t seed) const {
  if (X.cols() != impl_->feature_count) {
    throw DimensionMismatchError("feature_importance: dimension mismatch");
  }
  return impl_->importance(X, y, seed);
}

std::vector<double> TrainedLearner::staged_training_error() const {
  return impl_->staged_training_error();
}

void TrainedLearner::save(BinaryWriter& w) const {
  w.i32(static_cast<int>(impl_->spec.kind));
  w.u64(impl_->spec.seed);
  for (const auto& name : Hyperparams::field_names()) w.f64(impl_->spec.hp.get(name));
  w.u64(impl_->feature_count);
  impl_->save_payload(w);
}

TrainedLearner TrainedLearner::load(BinaryReader& r) {
  LearnerSpec spec;
  const int kind_tag = r.i32();
  if (kind_tag < 0 || kind_tag >= static_cast<int>(kAllLearnerKinds.size())) {
    throw CorruptPayloadError("bad learner kind tag " + std::to_string(kind_tag));
  }
  spec.kind = static_cast<LearnerKind>(kind_tag);
  spec.seed = r.u64();
  for (const auto& name : Hyperparams::field_names()) spec.hp.set(name, r.f64());
  const std::size_t feature_count = r.u64();
  TrainedLearner model;
  model.impl_ = load_learner_payload(spec, feature_count, r);
  return model;
}

TrainedLearner fit(const LearnerSpec& spec, const Matrix& X, const std::vector<int>& y,
                   std::uint64_t fit_salt) {
  spec.hp.validate(spec.kind);
  if (X.rows() != y.size()) {
    throw DimensionMismatchError("fit: " + std::to_string(X.rows()) + " rows but " +
                                 std::to_string(y.size()) + " labels");
  }
  if (X.rows() < 2) throw Error("fit: need at least 2 training rows");
  bool has_pos = false, has_neg = false;
  for (int v : y) (v == 1 ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg) {
    throw SingleClassTrainingError(std::string("fit: training labels for ") +
                                   kind_name(spec.kind) + " contain a single class");
  }
  for (double v : X.data()) {
    if (!std::isfinite(v)) throw Error("fit: non-finite feature value");
  }

  const std::uint64_t rng_seed = mix_seed(spec.seed, fit_salt);
  std::unique_ptr<LearnerImpl> impl;
  switch (spec.kind) {
    case LearnerKind::LR: impl = fit_logistic_regression(spec, X, y, rng_seed); break;
    case LearnerKind::NB: impl = fit_naive_bayes(spec, X, y, rng_seed); break;
    case LearnerKind::KNN: impl = fit_knn(spec, X, y, rng_seed); break;
    case LearnerKind::SVM_LINEAR: impl = fit_linear_svm(spec, X, y, rng_seed); break;
    case LearnerKind::DTREE: impl = fit_decision_tree(spec, X, y, rng_seed); break;
    case LearnerKind::RF:
    case LearnerKind::EXTRA_TREES: impl = fit_forest(spec, X, y, rng_seed); break;
    case LearnerKind::GBM: impl = fit_gradient_boosting(spec, X, y, rng_seed); break;
    case LearnerKind::ADABOOST: impl = fit_adaboost(spec, X, y, rng_seed); break;
  }
  impl->spec = spec;
  impl->feature_count = X.cols();

  TrainedLearner model;
  model.impl_ = std::move(impl);
  return model;
}

double cv_accuracy(const Dataset& ds, const LearnerSpec& spec, int k, std::uint64_t seed) {
  const FoldPlan plan = stratified_kfold(ds, k, seed);
  double acc_sum = 0.0;
  for (int f = 0; f < k; ++f) {
    const auto [train, test] = split_by_fold(ds, plan, f);
    const TrainedLearner model = fit(spec, train.features, train.labels, mix_seed(0xCAFE, f));
    const std::vector<double> p = model.predict_proba(test.features);
    acc_sum += accuracy_at(test.labels, p);
  }
  return acc_sum / k;
}

}  // namespace phishstack
