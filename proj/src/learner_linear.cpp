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

namespace phishstack {

namespace {

// Shared by LR and linear SVM: scaled inputs, linear decision function.
struct LinearModelBase : LearnerImpl {
  MinMaxScaler scaler;
  std::vector<double> weights;
  double bias = 0.0;

  double decision(std::span<const double> x_scaled) const {
    double z = bias;
    for (std::size_t c = 0; c < weights.size(); ++c) z += weights[c] * x_scaled[c];
    return z;
  }

  // |coefficients| on the scaled columns.
  std::vector<double> importance(const Matrix&, const std::vector<int>&,
                                 std::uint64_t) const override {
    std::vector<double> imp(weights.size());
    for (std::size_t c = 0; c < weights.size(); ++c) imp[c] = std::abs(weights[c]);
    return imp;
  }
};

struct LogisticRegressionImpl final : LinearModelBase {
  void predict_proba_into(const Matrix& X, std::span<double> out) const override {
    const Matrix Xs = scaler.transform(X);
    for (std::size_t r = 0; r < Xs.rows(); ++r) out[r] = sigmoid(decision(Xs.row(r)));
  }

  void save_payload(BinaryWriter& w) const override {
    scaler.save(w);
    w.vec_f64(weights);
    w.f64(bias);
  }
  static std::unique_ptr<LearnerImpl> load(BinaryReader& r) {
    auto m = std::make_unique<LogisticRegressionImpl>();
    m->scaler = MinMaxScaler::load(r);
    m->weights = r.vec_f64();
    m->bias = r.f64();
    return m;
  }
};

struct LinearSvmImpl final : LinearModelBase {
  double platt_a = -1.0;
  double platt_b = 0.0;

  void predict_proba_into(const Matrix& X, std::span<double> out) const override {
    const Matrix Xs = scaler.transform(X);
    for (std::size_t r = 0; r < Xs.rows(); ++r) {
      out[r] = sigmoid(-(platt_a * decision(Xs.row(r)) + platt_b));
    }
  }

  void save_payload(BinaryWriter& w) const override {
    scaler.save(w);
    w.vec_f64(weights);
    w.f64(bias);
    w.f64(platt_a);
    w.f64(platt_b);
  }
  static std::unique_ptr<LearnerImpl> load(BinaryReader& r) {
    auto m = std::make_unique<LinearSvmImpl>();
    m->scaler = MinMaxScaler::load(r);
    m->weights = r.vec_f64();
    m->bias = r.f64();
    m->platt_a = r.f64();
    m->platt_b = r.f64();
    return m;
  }
};

// Full-batch adaptive-moment gradient descent on the L2-penalized mean
// cross-entropy. Stops at gradient norm <= tol or the epoch cap.
void train_logistic(const Matrix& Xs, const std::vector<int>& y, double l2, int max_epochs,
                    double tol, std::vector<double>& weights, double& bias) {
  const std::size_t n = Xs.rows();
  const std::size_t d = Xs.cols();
  weights.assign(d, 0.0);
  bias = 0.0;

  std::vector<double> m(d + 1, 0.0), v(d + 1, 0.0), grad(d + 1, 0.0);
  const double step = 0.1, beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  double beta1_t = 1.0, beta2_t = 1.0;

  for (int epoch = 1; epoch <= max_epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      const auto x = Xs.row(r);
      double z = bias;
      for (std::size_t c = 0; c < d; ++c) z += weights[c] * x[c];
      const double err = sigmoid(z) - static_cast<double>(y[r]);
      for (std::size_t c = 0; c < d; ++c) grad[c] += err * x[c];
      grad[d] += err;
    }
    double norm_sq = 0.0;
    for (std::size_t c = 0; c <= d; ++c) {
      grad[c] /= static_cast<double>(n);
      if (c < d) grad[c] += l2 * weights[c] / static_cast<double>(n);
      norm_sq += grad[c] * grad[c];
    }
    if (std::sqrt(norm_sq) <= tol) break;

    beta1_t *= beta1;
    beta2_t *= beta2;
    for (std::size_t c = 0; c <= d; ++c) {
      m[c] = beta1 * m[c] + (1.0 - beta1) * grad[c];
      v[c] = beta2 * v[c] + (1.0 - beta2) * grad[c] * grad[c];
      const double m_hat = m[c] / (1.0 - beta1_t);
      const double v_hat = v[c] / (1.0 - beta2_t);
      const double delta = step * m_hat / (std::sqrt(v_hat) + eps);
      if (c < d) {
        weights[c] -= delta;
      } else {
        bias -= delta;
      }
    }
  }
}

// Pegasos-style SGD on the hinge loss with L2 regularization lambda = reg/n
// (per-sample equivalent of unit regularization strength). The bias rides
// along as an augmented constant feature so the projection bounds it too.
void train_svm_sgd(const Matrix& Xs, const std::vector<int>& y, double reg, int epochs,
                   Rng& rng, std::vector<double>& weights, double& bias) {
  const std::size_t n = Xs.rows();
  const std::size_t d = Xs.cols();
  std::vector<double> w(d + 1, 0.0);  // w[d] is the bias term
  const double lambda = reg / static_cast<double>(n);
  const double radius_sq = 1.0 / lambda;

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::uint64_t t = 0;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    rng.shuffle(std::span<int>(order));
    for (std::size_t i = 0; i < n; ++i) {
      ++t;
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      const int row = order[i];
      const auto x = Xs.row(row);
      const double target = y[row] == 1 ? 1.0 : -1.0;
      double z = w[d];
      for (std::size_t c = 0; c < d; ++c) z += w[c] * x[c];
      const double scale = 1.0 - eta * lambda;
      for (std::size_t c = 0; c <= d; ++c) w[c] *= scale;
      if (target * z < 1.0) {
        for (std::size_t c = 0; c < d; ++c) w[c] += eta * target * x[c];
        w[d] += eta * target;
      }
      double norm_sq = 0.0;
      for (std::size_t c = 0; c <= d; ++c) norm_sq += w[c] * w[c];
      if (norm_sq > radius_sq) {
        const double shrink = std::sqrt(radius_sq / norm_sq);
        for (std::size_t c = 0; c <= d; ++c) w[c] *= shrink;
      }
    }
  }
  weights.assign(w.begin(), w.begin() + d);
  bias = w[d];
}

// Platt sigmoid fit (regularized targets, Newton iterations with backtracking).
void fit_platt(const std::vector<double>& scores, const std::vector<int>& y, double& a,
               double& b) {
  const std::size_t n = scores.size();
  double prior_pos = 0.0;
  for (int v : y) prior_pos += v;
  const double n_pos = prior_pos, n_neg = static_cast<double>(n) - prior_pos;

  const double t_pos = (n_pos + 1.0) / (n_pos + 2.0);
  const double t_neg = 1.0 / (n_neg + 2.0);
  std::vector<double> target(n);
  for (std::size_t i = 0; i < n; ++i) target[i] = y[i] == 1 ? t_pos : t_neg;

  a = 0.0;
  b = std::log((n_neg + 1.0) / (n_pos + 1.0));

  auto objective = [&](double aa, double bb) {
    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = aa * scores[i] + bb;
      // log(1 + exp(-|z|)) formulation keeps this stable for large |z|.
      const double log1p_exp = z >= 0.0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
      obj += target[i] * log1p_exp + (1.0 - target[i]) * (log1p_exp + z);
    }
    return obj;
  };

  const int max_iter = 100;
  const double min_step = 1e-10, sigma_reg = 1e-12;
  double fval = objective(a, b);
  for (int iter = 0; iter < max_iter; ++iter) {
    double h11 = sigma_reg, h22 = sigma_reg, h21 = 0.0, g1 = 0.0, g2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = a * scores[i] + b;
      const double p = sigmoid(-z);  // P(y=1 | score) under current (a, b)
      const double dd = p * (1.0 - p);
      h11 += scores[i] * scores[i] * dd;
      h22 += dd;
      h21 += scores[i] * dd;
      const double err = target[i] - p;
      g1 += scores[i] * err;
      g2 += err;
    }
    if (std::abs(g1) < 1e-10 && std::abs(g2) < 1e-10) break;
    const double det = h11 * h22 - h21 * h21;
    const double da = -(h22 * g1 - h21 * g2) / det;
    const double db = -(-h21 * g1 + h11 * g2) / det;
    const double grad_dot = g1 * da + g2 * db;

    double step_size = 1.0;
    bool moved = false;
    while (step_size >= min_step) {
      const double na = a + step_size * da;
      const double nb = b + step_size * db;
      const double nf = objective(na, nb);
      if (nf < fval + 1e-4 * step_size * grad_dot) {
        a = na;
        b = nb;
        fval = nf;
        moved = true;
        break;
      }
      step_size /= 2.0;
    }
    if (!moved) break;
  }
}

}  // namespace

std::unique_ptr<LearnerImpl> fit_logistic_regression(const LearnerSpec& spec, const Matrix& X,
                                                     const std::vector<int>& y,
                                                     std::uint64_t) {
  auto model = std::make_unique<LogisticRegressionImpl>();
  model->scaler.fit(X);
  const Matrix Xs = model->scaler.transform(X);
  train_logistic(Xs, y, spec.hp.lr_l2_penalty, spec.hp.lr_max_epochs, spec.hp.lr_grad_tol,
                 model->weights, model->bias);
  return model;
}

std::unique_ptr<LearnerImpl> fit_linear_svm(const LearnerSpec& spec, const Matrix& X,
                                            const std::vector<int>& y, std::uint64_t rng_seed) {
  auto model = std::make_unique<LinearSvmImpl>();
  model->scaler.fit(X);
  const Matrix Xs = model->scaler.transform(X);
  const std::size_t n = Xs.rows();

  // Stratified 80/20 split for Platt calibration: train a throwaway SVM on
  // the 80%, score the held-out 20%, fit the sigmoid on those scores.
  Rng rng(mix_seed(rng_seed, 0x5f3759df));
  std::vector<int> pos_rows, neg_rows;
  for (std::size_t i = 0; i < n; ++i) {
    (y[i] == 1 ? pos_rows : neg_rows).push_back(static_cast<int>(i));
  }
  rng.shuffle(std::span<int>(pos_rows));
  rng.shuffle(std::span<int>(neg_rows));
  std::vector<int> cal_rows, core_rows;
  auto deal = [&](std::vector<int>& rows) {
    const std::size_t n_cal = rows.size() / 5;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      (i < n_cal ? cal_rows : core_rows).push_back(rows[i]);
    }
  };
  deal(pos_rows);
  deal(neg_rows);
  std::sort(cal_rows.begin(), cal_rows.end());
  std::sort(core_rows.begin(), core_rows.end());

  bool calibrated = false;
  if (!cal_rows.empty()) {
    std::vector<int> core_y;
    core_y.reserve(core_rows.size());
    bool has_pos = false, has_neg = false;
    for (int r : core_rows) {
      core_y.push_back(y[r]);
      (y[r] == 1 ? has_pos : has_neg) = true;
    }
    if (has_pos && has_neg) {
      const Matrix core_X = Xs.take_rows(core_rows);
      std::vector<double> cal_weights;
      double cal_bias = 0.0;
      Rng cal_rng(mix_seed(rng_seed, 0xca1));
      train_svm_sgd(core_X, core_y, spec.hp.svm_regularization, spec.hp.svm_epochs, cal_rng,
                    cal_weights, cal_bias);

      std::vector<double> scores;
      std::vector<int> cal_y;
      scores.reserve(cal_rows.size());
      for (int r : cal_rows) {
        const auto x = Xs.row(r);
        double z = cal_bias;
        for (std::size_t c = 0; c < Xs.cols(); ++c) z += cal_weights[c] * x[c];
        scores.push_back(z);
        cal_y.push_back(y[r]);
      }
      fit_platt(scores, cal_y, model->platt_a, model->platt_b);
      calibrated = true;
    }
  }
  if (!calibrated) {
    // Too little data to calibrate; fall back to a plain sigmoid of the margin.
    model->platt_a = -1.0;
    model->platt_b = 0.0;
  }

  Rng full_rng(mix_seed(rng_seed, 0xf111));
  train_svm_sgd(Xs, y, spec.hp.svm_regularization, spec.hp.svm_epochs, full_rng, model->weights,
                model->bias);
  return model;
}

std::unique_ptr<LearnerImpl> load_linear_svm_payload(BinaryReader& r) {
  return LinearSvmImpl::load(r);
}
std::unique_ptr<LearnerImpl> load_logistic_regression_payload(BinaryReader& r) {
  return LogisticRegressionImpl::load(r);
}

}  // namespace phishstack
