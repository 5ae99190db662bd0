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

#ifndef PHISHSTACK_TEST_HELPERS_HPP
#define PHISHSTACK_TEST_HELPERS_HPP

#include <string>
#include <vector>

#include "phishstack/dataset.hpp"
#include "phishstack/matrix.hpp"
#include "phishstack/rng.hpp"

namespace phishstack::testing {

inline Dataset make_dataset(Matrix features, std::vector<int> labels,
                            const std::string& provenance = "synthetic") {
  Dataset ds;
  ds.features = std::move(features);
  ds.labels = std::move(labels);
  ds.feature_names.reserve(ds.features.cols());
  for (std::size_t c = 0; c < ds.features.cols(); ++c) {
    ds.feature_names.push_back("f" + std::to_string(c));
  }
  ds.provenance = provenance;
  return ds;
}

/// Two Gaussian blobs separated along every axis; linearly separable when
/// the margin is wide enough.
inline Dataset make_blobs(std::size_t n_per_class, std::size_t d, double center_gap,
                          double spread, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = 2 * n_per_class;
  Matrix X(n, d);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int label = i < n_per_class ? 0 : 1;
    y[i] = label;
    const double center = label == 1 ? center_gap / 2.0 : -center_gap / 2.0;
    for (std::size_t c = 0; c < d; ++c) X(i, c) = center + spread * rng.normal();
  }
  return make_dataset(std::move(X), std::move(y), "blobs");
}

/// Nonlinear two-class problem: label from a sign pattern over the first two
/// coordinates (XOR-like) plus optional noise features. Tree learners shine,
/// linear ones cannot fully solve it.
inline Dataset make_xor_dataset(std::size_t n, std::size_t extra_noise_features,
                                std::uint64_t seed, double flip_fraction = 0.0) {
  Rng rng(seed);
  const std::size_t d = 2 + extra_noise_features;
  Matrix X(n, d);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = rng.uniform(-1.0, 1.0);
    const double b = rng.uniform(-1.0, 1.0);
    X(i, 0) = a;
    X(i, 1) = b;
    for (std::size_t c = 2; c < d; ++c) X(i, c) = rng.uniform(-1.0, 1.0);
    y[i] = (a > 0.0) != (b > 0.0) ? 1 : 0;
    if (flip_fraction > 0.0 && rng.uniform() < flip_fraction) y[i] = 1 - y[i];
  }
  return make_dataset(std::move(X), std::move(y), "xor");
}

/// One informative column (a copy of the label) plus uniform noise columns.
inline Dataset make_label_copy_dataset(std::size_t n, std::size_t noise_features,
                                       std::uint64_t seed) {
  Rng rng(seed);
  Matrix X(n, 1 + noise_features);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = static_cast<int>(rng.uniform_int(2));
    X(i, 0) = static_cast<double>(y[i]);
    for (std::size_t c = 1; c < X.cols(); ++c) X(i, c) = rng.uniform();
  }
  return make_dataset(std::move(X), std::move(y), "label-copy");
}

}  // namespace phishstack::testing

#endif  // PHISHSTACK_TEST_HELPERS_HPP
