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

#include "learner_impl.hpp"
#include "phishstack/metrics.hpp"

namespace phishstack {

namespace {

/// Brute-force k-nearest-neighbors on min-max-scaled features, Euclidean
/// distance, distance ties broken toward the lower training-row index.
struct KnnImpl final : LearnerImpl {
  Matrix train;  // scaled training matrix
  std::vector<int> labels;
  MinMaxScaler scaler;
  int k = 5;

  // Positive fraction among the k nearest rows given precomputed squared
  // distances to every training row.
  double vote(std::span<const double> dist_sq) const {
    const std::size_t n = train.rows();
    const std::size_t kk = std::min<std::size_t>(k, n);
    // Insertion into a small sorted buffer of (distance, index).
    thread_local std::vector<std::pair<double, int>> best;
    best.clear();
    for (std::size_t t = 0; t < n; ++t) {
      const std::pair<double, int> cand{dist_sq[t], static_cast<int>(t)};
      if (best.size() < kk) {
        best.insert(std::upper_bound(best.begin(), best.end(), cand), cand);
      } else if (cand < best.back()) {
        best.pop_back();
        best.insert(std::upper_bound(best.begin(), best.end(), cand), cand);
      }
    }
    int pos = 0;
    for (const auto& [dist, idx] : best) pos += labels[idx];
    return static_cast<double>(pos) / static_cast<double>(kk);
  }

  void predict_proba_into(const Matrix& X, std::span<double> out) const override {
    const Matrix Xs = scaler.transform(X);
    const std::size_t n = train.rows();
    const std::size_t d = train.cols();
    std::vector<double> dist_sq(n);
    for (std::size_t r = 0; r < Xs.rows(); ++r) {
      const auto x = Xs.row(r);
      for (std::size_t t = 0; t < n; ++t) {
        const auto z = train.row(t);
        double acc = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
          const double diff = x[c] - z[c];
          acc += diff * diff;
        }
        dist_sq[t] = acc;
      }
      out[r] = vote(dist_sq);
    }
  }

  // Permutation importance with the distance matrix cached once: shuffling
  // one column only changes one squared term per pair, so each shuffle is
  // O(eval x train) instead of O(eval x train x d).
  std::vector<double> importance(const Matrix& X, const std::vector<int>& y,
                                 std::uint64_t seed) const override {
    const std::size_t d = train.cols();
    const std::size_t n = train.rows();
    Rng rng(mix_seed(seed, 0x9e47));

    constexpr std::size_t kMaxEvalRows = 512;
    std::vector<int> eval_rows(X.rows());
    for (std::size_t i = 0; i < X.rows(); ++i) eval_rows[i] = static_cast<int>(i);
    if (eval_rows.size() > kMaxEvalRows) {
      rng.shuffle(std::span<int>(eval_rows));
      eval_rows.resize(kMaxEvalRows);
      std::sort(eval_rows.begin(), eval_rows.end());
    }
    const std::size_t n_eval = eval_rows.size();

    const Matrix eval = scaler.transform(X.take_rows(eval_rows));
    std::vector<int> eval_y(n_eval);
    for (std::size_t i = 0; i < n_eval; ++i) eval_y[i] = y[eval_rows[i]];

    Matrix base_dist(n_eval, n);
    std::vector<double> probs(n_eval);
    for (std::size_t i = 0; i < n_eval; ++i) {
      const auto x = eval.row(i);
      for (std::size_t t = 0; t < n; ++t) {
        const auto z = train.row(t);
        double acc = 0.0;
        for (std::size_t c = 0; c < train.cols(); ++c) {
          const double diff = x[c] - z[c];
          acc += diff * diff;
        }
        base_dist(i, t) = acc;
      }
      probs[i] = vote(base_dist.row(i));
    }
    const double base_acc = accuracy_at(eval_y, probs);

    constexpr int kRepeats = 3;
    std::vector<double> result(d, 0.0);
    std::vector<int> perm(n_eval);
    std::vector<double> adjusted(n);
    for (std::size_t c = 0; c < d; ++c) {
      double drop_sum = 0.0;
      for (int rep = 0; rep < kRepeats; ++rep) {
        for (std::size_t i = 0; i < n_eval; ++i) perm[i] = static_cast<int>(i);
        rng.shuffle(std::span<int>(perm));
        for (std::size_t i = 0; i < n_eval; ++i) {
          const double old_v = eval(i, c);
          const double new_v = eval(perm[i], c);
          const auto row_dist = base_dist.row(i);
          for (std::size_t t = 0; t < n; ++t) {
            const double zc = train(t, c);
            const double od = old_v - zc;
            const double nd = new_v - zc;
            adjusted[t] = row_dist[t] - od * od + nd * nd;
          }
          probs[i] = vote(adjusted);
        }
        drop_sum += base_acc - accuracy_at(eval_y, probs);
      }
      result[c] = std::max(0.0, drop_sum / kRepeats);
    }
    return result;
  }

  void save_payload(BinaryWriter& w) const override {
    scaler.save(w);
    w.u64(train.rows());
    w.u64(train.cols());
    w.vec_f64(train.data());
    w.vec_i32(labels);
  }
  static std::unique_ptr<LearnerImpl> load(BinaryReader& r, int k) {
    auto m = std::make_unique<KnnImpl>();
    m->scaler = MinMaxScaler::load(r);
    const std::uint64_t rows = r.u64();
    const std::uint64_t cols = r.u64();
    m->train = Matrix(rows, cols);
    m->train.data() = r.vec_f64();
    if (m->train.data().size() != rows * cols) {
      throw CorruptPayloadError("knn payload: matrix size mismatch");
    }
    m->labels = r.vec_i32();
    m->k = k;
    return m;
  }
};

}  // namespace

std::unique_ptr<LearnerImpl> fit_knn(const LearnerSpec& spec, const Matrix& X,
                                     const std::vector<int>& y, std::uint64_t) {
  auto model = std::make_unique<KnnImpl>();
  model->scaler.fit(X);
  model->train = model->scaler.transform(X);
  model->labels = y;
  model->k = spec.hp.k_neighbors;
  return model;
}

std::unique_ptr<LearnerImpl> load_knn_payload(BinaryReader& r, int k) {
  return KnnImpl::load(r, k);
}

}  // namespace phishstack
