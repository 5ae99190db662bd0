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

#include "learner_impl.hpp"

namespace phishstack {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

/// Gaussian naive Bayes with a per-feature variance floor.
struct NaiveBayesImpl final : LearnerImpl {
  double log_prior_pos = 0.0;
  double log_prior_neg = 0.0;
  std::vector<double> mean_pos, mean_neg;
  std::vector<double> var_pos, var_neg;

  double class_log_likelihood(std::span<const double> x, const std::vector<double>& mean,
                              const std::vector<double>& var) const {
    double ll = 0.0;
    for (std::size_t c = 0; c < mean.size(); ++c) {
      const double diff = x[c] - mean[c];
      ll -= 0.5 * (kLog2Pi + std::log(var[c]) + diff * diff / var[c]);
    }
    return ll;
  }

  void predict_proba_into(const Matrix& X, std::span<double> out) const override {
    for (std::size_t r = 0; r < X.rows(); ++r) {
      const auto x = X.row(r);
      const double joint_pos = log_prior_pos + class_log_likelihood(x, mean_pos, var_pos);
      const double joint_neg = log_prior_neg + class_log_likelihood(x, mean_neg, var_neg);
      out[r] = sigmoid(joint_pos - joint_neg);
    }
  }

  void save_payload(BinaryWriter& w) const override {
    w.f64(log_prior_pos);
    w.f64(log_prior_neg);
    w.vec_f64(mean_pos);
    w.vec_f64(mean_neg);
    w.vec_f64(var_pos);
    w.vec_f64(var_neg);
  }
  static std::unique_ptr<LearnerImpl> load(BinaryReader& r) {
    auto m = std::make_unique<NaiveBayesImpl>();
    m->log_prior_pos = r.f64();
    m->log_prior_neg = r.f64();
    m->mean_pos = r.vec_f64();
    m->mean_neg = r.vec_f64();
    m->var_pos = r.vec_f64();
    m->var_neg = r.vec_f64();
    return m;
  }
};

}  // namespace

std::unique_ptr<LearnerImpl> fit_naive_bayes(const LearnerSpec& spec, const Matrix& X,
                                             const std::vector<int>& y, std::uint64_t) {
  const std::size_t n = X.rows();
  const std::size_t d = X.cols();
  auto model = std::make_unique<NaiveBayesImpl>();
  model->mean_pos.assign(d, 0.0);
  model->mean_neg.assign(d, 0.0);
  model->var_pos.assign(d, 0.0);
  model->var_neg.assign(d, 0.0);

  std::size_t n_pos = 0;
  for (std::size_t r = 0; r < n; ++r) {
    auto& mean = y[r] == 1 ? model->mean_pos : model->mean_neg;
    n_pos += (y[r] == 1);
    for (std::size_t c = 0; c < d; ++c) mean[c] += X(r, c);
  }
  const std::size_t n_neg = n - n_pos;
  for (std::size_t c = 0; c < d; ++c) {
    model->mean_pos[c] /= static_cast<double>(n_pos);
    model->mean_neg[c] /= static_cast<double>(n_neg);
  }
  for (std::size_t r = 0; r < n; ++r) {
    const auto& mean = y[r] == 1 ? model->mean_pos : model->mean_neg;
    auto& var = y[r] == 1 ? model->var_pos : model->var_neg;
    for (std::size_t c = 0; c < d; ++c) {
      const double diff = X(r, c) - mean[c];
      var[c] += diff * diff;
    }
  }
  const double floor = spec.hp.nb_variance_floor;
  for (std::size_t c = 0; c < d; ++c) {
    model->var_pos[c] = std::max(model->var_pos[c] / static_cast<double>(n_pos), floor);
    model->var_neg[c] = std::max(model->var_neg[c] / static_cast<double>(n_neg), floor);
  }
  model->log_prior_pos = std::log(static_cast<double>(n_pos) / static_cast<double>(n));
  model->log_prior_neg = std::log(static_cast<double>(n_neg) / static_cast<double>(n));
  return model;
}

std::unique_ptr<LearnerImpl> load_naive_bayes_payload(BinaryReader& r) {
  return NaiveBayesImpl::load(r);
}

}  // namespace phishstack
