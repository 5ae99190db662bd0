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

#include "phishstack/meta_mlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "phishstack/dataset.hpp"
#include "phishstack/errors.hpp"
#include "phishstack/metrics.hpp"
#include "phishstack/rng.hpp"

namespace phishstack {

namespace {

double stable_sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double bce(double p, int y) {
  const double clipped = std::clamp(p, 1e-12, 1.0 - 1e-12);
  return y == 1 ? -std::log(clipped) : -std::log(1.0 - clipped);
}

std::vector<int> layer_sizes(const MlpConfig& cfg, int input_width) {
  std::vector<int> sizes;
  sizes.push_back(input_width);
  for (int h : cfg.hidden_layers) sizes.push_back(h);
  sizes.push_back(1);
  return sizes;
}

void xavier_init(MlpModel& model, const std::vector<int>& sizes, Rng& rng) {
  model.weights.clear();
  model.biases.clear();
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const int fan_in = sizes[l];
    const int fan_out = sizes[l + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Matrix w(fan_in, fan_out);
    for (int i = 0; i < fan_in; ++i) {
      for (int j = 0; j < fan_out; ++j) w(i, j) = rng.uniform(-limit, limit);
    }
    model.weights.push_back(std::move(w));
    model.biases.emplace_back(fan_out, 0.0);
  }
}

// Scratch space for forward/backward passes over a single sample.
struct Workspace {
  std::vector<std::vector<double>> activations;  // a[0] = input
  std::vector<std::vector<double>> pre_acts;     // z per layer
  std::vector<std::vector<double>> deltas;

  explicit Workspace(const std::vector<int>& sizes) {
    activations.resize(sizes.size());
    pre_acts.resize(sizes.size() - 1);
    deltas.resize(sizes.size() - 1);
    for (std::size_t l = 0; l < sizes.size(); ++l) activations[l].resize(sizes[l]);
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
      pre_acts[l].resize(sizes[l + 1]);
      deltas[l].resize(sizes[l + 1]);
    }
  }
};

double forward(const MlpModel& model, std::span<const double> x, Workspace& ws) {
  std::copy(x.begin(), x.end(), ws.activations[0].begin());
  const std::size_t n_layers = model.weights.size();
  for (std::size_t l = 0; l < n_layers; ++l) {
    const Matrix& w = model.weights[l];
    const auto& b = model.biases[l];
    const auto& in = ws.activations[l];
    auto& z = ws.pre_acts[l];
    for (std::size_t j = 0; j < z.size(); ++j) z[j] = b[j];
    for (std::size_t i = 0; i < w.rows(); ++i) {
      const double a = in[i];
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < z.size(); ++j) z[j] += a * w(i, j);
    }
    auto& out = ws.activations[l + 1];
    if (l + 1 == n_layers) {
      out[0] = stable_sigmoid(std::clamp(z[0], -500.0, 500.0));
    } else {
      for (std::size_t j = 0; j < z.size(); ++j) out[j] = z[j] > 0.0 ? z[j] : 0.0;
    }
  }
  return ws.activations.back()[0];
}

// Backpropagates one sample's BCE gradient, scaled by `scale`, into the
// accumulators. Must be called right after forward() on the same sample.
void backward(const MlpModel& model, int y, double scale, Workspace& ws,
              std::vector<Matrix>& grad_w, std::vector<std::vector<double>>& grad_b) {
  const std::size_t n_layers = model.weights.size();
  // d(BCE)/dz for the sigmoid output unit.
  ws.deltas[n_layers - 1][0] = (ws.activations.back()[0] - static_cast<double>(y)) * scale;

  for (std::size_t l = n_layers; l-- > 0;) {
    const auto& delta = ws.deltas[l];
    const auto& in = ws.activations[l];
    Matrix& gw = grad_w[l];
    auto& gb = grad_b[l];
    for (std::size_t j = 0; j < delta.size(); ++j) gb[j] += delta[j];
    for (std::size_t i = 0; i < gw.rows(); ++i) {
      const double a = in[i];
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < delta.size(); ++j) gw(i, j) += a * delta[j];
    }
    if (l == 0) break;
    const Matrix& w = model.weights[l];
    auto& prev = ws.deltas[l - 1];
    for (std::size_t i = 0; i < prev.size(); ++i) {
      if (ws.pre_acts[l - 1][i] <= 0.0) {  // ReLU gate
        prev[i] = 0.0;
        continue;
      }
      double acc = 0.0;
      for (std::size_t j = 0; j < delta.size(); ++j) acc += w(i, j) * delta[j];
      prev[i] = acc;
    }
  }
}

struct AdamState {
  std::vector<Matrix> m_w, v_w;
  std::vector<std::vector<double>> m_b, v_b;
  double beta1_t = 1.0;
  double beta2_t = 1.0;

  explicit AdamState(const MlpModel& model) {
    for (const Matrix& w : model.weights) {
      m_w.emplace_back(w.rows(), w.cols());
      v_w.emplace_back(w.rows(), w.cols());
    }
    for (const auto& b : model.biases) {
      m_b.emplace_back(b.size(), 0.0);
      v_b.emplace_back(b.size(), 0.0);
    }
  }

  void step(MlpModel& model, const std::vector<Matrix>& grad_w,
            const std::vector<std::vector<double>>& grad_b, double lr) {
    constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    beta1_t *= beta1;
    beta2_t *= beta2;
    const double bc1 = 1.0 - beta1_t;
    const double bc2 = 1.0 - beta2_t;
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
      auto& w = model.weights[l].data();
      const auto& g = grad_w[l].data();
      auto& m = m_w[l].data();
      auto& v = v_w[l].data();
      for (std::size_t i = 0; i < w.size(); ++i) {
        m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
        v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
        w[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + eps);
      }
      auto& b = model.biases[l];
      const auto& gb = grad_b[l];
      auto& mb = m_b[l];
      auto& vb = v_b[l];
      for (std::size_t i = 0; i < b.size(); ++i) {
        mb[i] = beta1 * mb[i] + (1.0 - beta1) * gb[i];
        vb[i] = beta2 * vb[i] + (1.0 - beta2) * gb[i] * gb[i];
        b[i] -= lr * (mb[i] / bc1) / (std::sqrt(vb[i] / bc2) + eps);
      }
    }
  }
};

double mean_loss(const MlpModel& model, const Matrix& X, const std::vector<int>& y,
                 std::span<const int> rows, Workspace& ws) {
  double total = 0.0;
  for (int r : rows) {
    total += bce(forward(model, X.row(r), ws), y[r]);
  }
  return total / static_cast<double>(rows.size());
}

}  // namespace

void MlpConfig::validate() const {
  if (hidden_layers.empty()) throw ConfigError("mlp: hidden_layers must be non-empty");
  for (int h : hidden_layers) {
    if (h < 1) throw ConfigError("mlp: layer widths must be >= 1");
  }
  if (learning_rate <= 0.0) throw ConfigError("mlp: learning_rate must be > 0");
  if (max_epochs < 1) throw ConfigError("mlp: max_epochs must be >= 1");
  if (batch_size < 1) throw ConfigError("mlp: batch_size must be >= 1");
  if (early_stop_patience < 1) throw ConfigError("mlp: early_stop_patience must be >= 1");
}

std::int64_t MlpConfig::parameter_count(int input_width) const {
  std::int64_t total = 0;
  int fan_in = input_width;
  for (int h : hidden_layers) {
    total += static_cast<std::int64_t>(fan_in + 1) * h;
    fan_in = h;
  }
  total += fan_in + 1;  // output unit
  return total;
}

std::string MlpConfig::topology_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < hidden_layers.size(); ++i) {
    if (i) out << '-';
    out << hidden_layers[i];
  }
  return out.str();
}

std::vector<int> MlpConfig::parse_topology(const std::string& text) {
  std::vector<int> layers;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, '-')) {
    if (token.empty()) throw ConfigError("mlp topology: empty layer in \"" + text + "\"");
    layers.push_back(std::stoi(token));
  }
  if (layers.empty()) throw ConfigError("mlp topology: no layers in \"" + text + "\"");
  return layers;
}

void MlpModel::save(BinaryWriter& w) const {
  w.i32(input_width);
  w.u64(weights.size());
  for (std::size_t l = 0; l < weights.size(); ++l) {
    w.u64(weights[l].rows());
    w.u64(weights[l].cols());
    w.vec_f64(weights[l].data());
    w.vec_f64(biases[l]);
  }
}

MlpModel MlpModel::load(BinaryReader& r) {
  MlpModel model;
  model.input_width = r.i32();
  const std::uint64_t n_layers = r.u64();
  for (std::uint64_t l = 0; l < n_layers; ++l) {
    const std::uint64_t rows = r.u64();
    const std::uint64_t cols = r.u64();
    Matrix w(rows, cols);
    w.data() = r.vec_f64();
    if (w.data().size() != rows * cols) throw CorruptPayloadError("mlp payload: shape mismatch");
    model.weights.push_back(std::move(w));
    model.biases.push_back(r.vec_f64());
  }
  return model;
}

MlpModel mlp_fit(const MlpConfig& cfg, const Matrix& X, const std::vector<int>& y) {
  cfg.validate();
  const std::size_t n = X.rows();
  if (n != y.size()) throw DimensionMismatchError("mlp_fit: rows vs labels mismatch");
  if (n < 2) throw Error("mlp_fit: need at least 2 rows");
  bool has_pos = false, has_neg = false;
  for (int v : y) (v == 1 ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg) {
    throw SingleClassTrainingError("mlp_fit: labels contain a single class");
  }
  for (double v : X.data()) {
    if (!std::isfinite(v)) throw Error("mlp_fit: non-finite input");
  }

  const std::vector<int> sizes = layer_sizes(cfg, static_cast<int>(X.cols()));
  Rng rng(mix_seed(cfg.seed, 0x311a));

  MlpModel model;
  model.input_width = static_cast<int>(X.cols());
  xavier_init(model, sizes, rng);

  // Stratified 10% validation split for early stopping. Disabled when either
  // class would not reach the validation set.
  std::vector<int> pos_rows, neg_rows;
  for (std::size_t i = 0; i < n; ++i) {
    (y[i] == 1 ? pos_rows : neg_rows).push_back(static_cast<int>(i));
  }
  rng.shuffle(std::span<int>(pos_rows));
  rng.shuffle(std::span<int>(neg_rows));
  const std::size_t val_pos = pos_rows.size() / 10;
  const std::size_t val_neg = neg_rows.size() / 10;
  std::vector<int> train_rows, val_rows;
  for (std::size_t i = 0; i < pos_rows.size(); ++i) {
    (i < val_pos ? val_rows : train_rows).push_back(pos_rows[i]);
  }
  for (std::size_t i = 0; i < neg_rows.size(); ++i) {
    (i < val_neg ? val_rows : train_rows).push_back(neg_rows[i]);
  }
  const bool early_stop = val_pos >= 1 && val_neg >= 1;
  if (!early_stop) {
    train_rows.insert(train_rows.end(), val_rows.begin(), val_rows.end());
    val_rows.clear();
  }
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(val_rows.begin(), val_rows.end());

  Workspace ws(sizes);
  std::vector<Matrix> grad_w;
  std::vector<std::vector<double>> grad_b;
  for (const Matrix& w : model.weights) grad_w.emplace_back(w.rows(), w.cols());
  for (const auto& b : model.biases) grad_b.emplace_back(b.size(), 0.0);
  AdamState adam(model);

  MlpModel best_snapshot = model;
  double best_val_loss = std::numeric_limits<double>::infinity();
  int epochs_since_improvement = 0;

  std::vector<int> order = train_rows;
  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    rng.shuffle(std::span<int>(order));
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      const double scale = 1.0 / static_cast<double>(stop - start);
      for (auto& g : grad_w) std::fill(g.data().begin(), g.data().end(), 0.0);
      for (auto& g : grad_b) std::fill(g.begin(), g.end(), 0.0);
      for (std::size_t i = start; i < stop; ++i) {
        const int row = order[i];
        const double p = forward(model, X.row(row), ws);
        epoch_loss += bce(p, y[row]);
        backward(model, y[row], scale, ws, grad_w, grad_b);
      }
      adam.step(model, grad_w, grad_b, cfg.learning_rate);
    }
    epoch_loss /= static_cast<double>(order.size());
    if (!std::isfinite(epoch_loss)) {
      throw NonFiniteLossError("mlp_fit: training loss diverged at epoch " +
                               std::to_string(epoch) + " (topology " + cfg.topology_string() +
                               ", lr " + std::to_string(cfg.learning_rate) + ")");
    }
    model.loss_trace.push_back(epoch_loss);

    if (early_stop) {
      const double val_loss = mean_loss(model, X, y, val_rows, ws);
      if (!std::isfinite(val_loss)) {
        throw NonFiniteLossError("mlp_fit: validation loss diverged");
      }
      if (val_loss < best_val_loss) {
        best_val_loss = val_loss;
        best_snapshot.weights = model.weights;
        best_snapshot.biases = model.biases;
        epochs_since_improvement = 0;
      } else {
        ++epochs_since_improvement;
        if (epochs_since_improvement >= cfg.early_stop_patience) break;
      }
    }
  }

  if (early_stop) {
    best_snapshot.loss_trace = std::move(model.loss_trace);
    best_snapshot.input_width = model.input_width;
    return best_snapshot;
  }
  return model;
}

std::vector<double> mlp_predict(const MlpModel& model, const Matrix& X) {
  if (static_cast<int>(X.cols()) != model.input_width) {
    throw DimensionMismatchError("mlp_predict: model input width " +
                                 std::to_string(model.input_width) + ", got " +
                                 std::to_string(X.cols()));
  }
  std::vector<int> sizes;
  sizes.push_back(model.input_width);
  for (const auto& b : model.biases) sizes.push_back(static_cast<int>(b.size()));
  Workspace ws(sizes);
  std::vector<double> out(X.rows());
  for (std::size_t r = 0; r < X.rows(); ++r) out[r] = forward(model, X.row(r), ws);
  return out;
}

MlpConfig mlp_grid_search(const std::vector<MlpConfig>& candidates, const Matrix& X,
                          const std::vector<int>& y, int k, std::uint64_t seed) {
  if (candidates.empty()) throw ConfigError("mlp_grid_search: no candidates");
  const FoldPlan plan = stratified_kfold_labels(y, k, mix_seed(seed, 0x9d1d));

  std::size_t best_index = 0;
  double best_acc = -1.0;
  std::int64_t best_params = 0;
  for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
    const MlpConfig& cand = candidates[ci];
    double acc_sum = 0.0;
    for (int f = 0; f < k; ++f) {
      std::vector<int> train_rows, test_rows;
      for (std::size_t i = 0; i < y.size(); ++i) {
        (plan.assignment[i] == f ? test_rows : train_rows).push_back(static_cast<int>(i));
      }
      Matrix train_X = X.take_rows(train_rows);
      std::vector<int> train_y, test_y;
      for (int r : train_rows) train_y.push_back(y[r]);
      for (int r : test_rows) test_y.push_back(y[r]);

      MlpConfig fold_cfg = cand;
      fold_cfg.seed = mix_seed(cand.seed, 0x6f1d, f);
      const MlpModel model = mlp_fit(fold_cfg, train_X, train_y);
      const std::vector<double> p = mlp_predict(model, X.take_rows(test_rows));
      acc_sum += accuracy_at(test_y, p);
    }
    const double acc = acc_sum / k;
    const std::int64_t params = cand.parameter_count(static_cast<int>(X.cols()));
    const bool better = acc > best_acc || (acc == best_acc && params < best_params);
    if (ci == 0 || better) {
      best_index = ci;
      best_acc = acc;
      best_params = params;
    }
  }
  return candidates[best_index];
}

MlpModel mlp_init(const MlpConfig& cfg, int input_width) {
  cfg.validate();
  const std::vector<int> sizes = layer_sizes(cfg, input_width);
  Rng rng(mix_seed(cfg.seed, 0x311a));
  MlpModel model;
  model.input_width = input_width;
  xavier_init(model, sizes, rng);
  return model;
}

std::pair<std::vector<Matrix>, std::vector<std::vector<double>>> mlp_loss_gradient(
    const MlpModel& model, const Matrix& X, const std::vector<int>& y) {
  std::vector<int> sizes;
  sizes.push_back(model.input_width);
  for (const auto& b : model.biases) sizes.push_back(static_cast<int>(b.size()));
  Workspace ws(sizes);

  std::vector<Matrix> grad_w;
  std::vector<std::vector<double>> grad_b;
  for (const Matrix& w : model.weights) grad_w.emplace_back(w.rows(), w.cols());
  for (const auto& b : model.biases) grad_b.emplace_back(b.size(), 0.0);
  const double scale = 1.0 / static_cast<double>(X.rows());
  for (std::size_t r = 0; r < X.rows(); ++r) {
    forward(model, X.row(r), ws);
    backward(model, y[r], scale, ws, grad_w, grad_b);
  }
  return {std::move(grad_w), std::move(grad_b)};
}

double gradient_check(const MlpConfig& cfg, const Matrix& X_small,
                      const std::vector<int>& y_small) {
  MlpModel model = mlp_init(cfg, static_cast<int>(X_small.cols()));
  const std::vector<int> sizes = layer_sizes(cfg, static_cast<int>(X_small.cols()));

  Workspace ws(sizes);
  std::vector<int> rows(X_small.rows());
  std::iota(rows.begin(), rows.end(), 0);

  auto [grad_w, grad_b] = mlp_loss_gradient(model, X_small, y_small);

  constexpr double h = 1e-5;
  double max_rel_error = 0.0;
  auto check_param = [&](double& param, double analytic) {
    const double saved = param;
    param = saved + h;
    const double up = mean_loss(model, X_small, y_small, rows, ws);
    param = saved - h;
    const double down = mean_loss(model, X_small, y_small, rows, ws);
    param = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double rel =
        std::abs(analytic - numeric) / std::max(std::abs(analytic) + std::abs(numeric), 1e-8);
    max_rel_error = std::max(max_rel_error, rel);
  };

  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    auto& w = model.weights[l].data();
    const auto& g = grad_w[l].data();
    for (std::size_t i = 0; i < w.size(); ++i) check_param(w[i], g[i]);
    auto& b = model.biases[l];
    const auto& gb = grad_b[l];
    for (std::size_t i = 0; i < b.size(); ++i) check_param(b[i], gb[i]);
  }
  return max_rel_error;
}

std::vector<MlpConfig> default_mlp_candidates(std::uint64_t seed) {
  std::vector<MlpConfig> candidates;
  for (const auto& topology :
       std::vector<std::vector<int>>{{6, 12, 32, 12, 6}, {32, 16}, {64, 32, 16}, {16, 16}}) {
    MlpConfig cfg;
    cfg.hidden_layers = topology;
    cfg.seed = seed;
    candidates.push_back(std::move(cfg));
  }
  return candidates;
}

}  // namespace phishstack
