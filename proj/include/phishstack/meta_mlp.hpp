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

#ifndef PHISHSTACK_META_MLP_HPP
#define PHISHSTACK_META_MLP_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "phishstack/binary_io.hpp"
#include "phishstack/matrix.hpp"

namespace phishstack {

/// Feed-forward meta-learner configuration. The default topology is the
/// 6-12-32-12-6 stack of hidden layers.
struct MlpConfig {
  std::vector<int> hidden_layers{6, 12, 32, 12, 6};
  int max_epochs = 500;
  int batch_size = 32;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  int early_stop_patience = 20;

  void validate() const;

  /// Total trainable parameters for an input of width m (grid-search ties
  /// break toward fewer).
  std::int64_t parameter_count(int input_width) const;

  std::string topology_string() const;  // e.g. "6-12-32-12-6"
  static std::vector<int> parse_topology(const std::string& text);

  bool operator==(const MlpConfig&) const = default;
};

/// Trained network: ReLU hidden layers, single sigmoid output unit.
struct MlpModel {
  std::vector<Matrix> weights;              // layer l: (fan_in x fan_out)
  std::vector<std::vector<double>> biases;  // layer l: fan_out
  std::vector<double> loss_trace;           // per-epoch training loss
  int input_width = 0;

  void save(BinaryWriter& w) const;
  static MlpModel load(BinaryReader& r);
};

/// Trains by mini-batch adaptive-moment gradient descent on the binary
/// cross-entropy; early-stops on an internal stratified 10% validation split
/// and restores the best-validation snapshot. Deterministic for fixed inputs
/// and cfg.seed. Throws NonFiniteLossError on divergence.
MlpModel mlp_fit(const MlpConfig& cfg, const Matrix& X, const std::vector<int>& y);

/// Strict sigmoid outputs in (0,1).
std::vector<double> mlp_predict(const MlpModel& model, const Matrix& X);

/// Candidate with the highest mean stratified k-fold accuracy; ties break
/// toward fewer parameters, then earlier list position.
MlpConfig mlp_grid_search(const std::vector<MlpConfig>& candidates, const Matrix& X,
                          const std::vector<int>& y, int k, std::uint64_t seed);

/// Max relative error between analytic backprop gradients and central finite
/// differences (h = 1e-5) at a seeded random parameter point.
double gradient_check(const MlpConfig& cfg, const Matrix& X_small,
                      const std::vector<int>& y_small);

/// The seeded Xavier-uniform starting point used by mlp_fit and
/// gradient_check (exposed for gradient verification).
MlpModel mlp_init(const MlpConfig& cfg, int input_width);

/// Analytic gradient of the mean cross-entropy at the model's current
/// parameters, in (per-layer weights, per-layer biases) layout.
std::pair<std::vector<Matrix>, std::vector<std::vector<double>>> mlp_loss_gradient(
    const MlpModel& model, const Matrix& X, const std::vector<int>& y);

/// The grid-search candidate topologies used by the experiment driver.
std::vector<MlpConfig> default_mlp_candidates(std::uint64_t seed);

}  // namespace phishstack

#endif  // PHISHSTACK_META_MLP_HPP
