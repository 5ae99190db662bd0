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

#include "tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace phishstack {

namespace {

struct Sample {
  double x;
  double y;  // class label (0/1) or regression target
  double w;
};

struct SplitCandidate {
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;

  bool beats(const SplitCandidate& other) const {
    if (gain != other.gain) return gain > other.gain;
    if (feature != other.feature) return feature < other.feature;
    return threshold < other.threshold;
  }
};

// Work item on the explicit build stack.
struct PendingNode {
  int node_id;
  std::size_t begin;
  std::size_t end;
  int depth;
};

class TreeBuilder {
 public:
  TreeBuilder(Tree& tree, const Matrix& X, std::span<const int> rows, const TreeParams& params,
              Rng& rng, std::vector<double>* importance_acc, bool regression)
      : tree_(tree),
        X_(X),
        params_(params),
        rng_(rng),
        importance_acc_(importance_acc),
        regression_(regression),
        rows_(rows.begin(), rows.end()),
        d_(X.cols()) {
    feature_pool_.resize(d_);
    std::iota(feature_pool_.begin(), feature_pool_.end(), 0);
    scratch_.resize(rows_.size());
    side_buf_.resize(rows_.size());
  }

  void set_classification(std::span<const int> y, std::span<const double> w) {
    y_class_ = y;
    weights_ = w;
  }
  void set_regression(std::span<const double> target) { target_ = target; }

  void build(std::vector<int>* leaf_of_row) {
    tree_.nodes.clear();
    tree_.nodes.push_back(TreeNode{});
    std::vector<PendingNode> stack;
    stack.push_back({0, 0, rows_.size(), 0});

    while (!stack.empty()) {
      const PendingNode item = stack.back();
      stack.pop_back();
      process(item, stack);
    }

    if (leaf_of_row) {
      leaf_of_row->assign(rows_.size(), -1);
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        (*leaf_of_row)[order_of_row_[i]] = leaf_id_of_position_[i];
      }
    }
  }

  void enable_row_tracking() {
    order_of_row_.resize(rows_.size());
    std::iota(order_of_row_.begin(), order_of_row_.end(), 0);
    leaf_id_of_position_.assign(rows_.size(), -1);
    track_rows_ = true;
  }

 private:
  double target_of(int row) const {
    return regression_ ? target_[row] : static_cast<double>(y_class_[row]);
  }
  double weight_of(int row) const { return weights_.empty() ? 1.0 : weights_[row]; }

  // Weighted impurity of a set, up to terms constant across a fixed parent:
  // classification: w_total * gini = w_total - (w_pos^2 + w_neg^2) / w_total
  // regression:     sum w*y^2 - (sum w*y)^2 / w_total
  static double impurity_cls(double w_total, double w_pos) {
    if (w_total <= 0.0) return 0.0;
    const double w_neg = w_total - w_pos;
    return w_total - (w_pos * w_pos + w_neg * w_neg) / w_total;
  }
  static double impurity_reg(double w_total, double sum_y, double sum_y2) {
    if (w_total <= 0.0) return 0.0;
    return sum_y2 - sum_y * sum_y / w_total;
  }

  void make_leaf(int node_id, std::size_t begin, std::size_t end, double w_total,
                 double stat_sum) {
    TreeNode& node = tree_.nodes[node_id];
    node.feature = -1;
    node.value = w_total > 0.0 ? stat_sum / w_total : 0.0;
    if (track_rows_) {
      for (std::size_t i = begin; i < end; ++i) leaf_id_of_position_[i] = node_id;
    }
  }

  void process(const PendingNode& item, std::vector<PendingNode>& stack) {
    const std::size_t count = item.end - item.begin;

    double w_total = 0.0, stat_sum = 0.0, stat_sq = 0.0;
    for (std::size_t i = item.begin; i < item.end; ++i) {
      const int row = rows_[i];
      const double w = weight_of(row);
      const double t = target_of(row);
      w_total += w;
      stat_sum += w * t;
      stat_sq += w * t * t;
    }

    const double parent_impurity = regression_ ? impurity_reg(w_total, stat_sum, stat_sq)
                                               : impurity_cls(w_total, stat_sum);

    const bool depth_done = params_.max_depth >= 0 && item.depth >= params_.max_depth;
    if (count < static_cast<std::size_t>(params_.min_samples_split) || depth_done ||
        parent_impurity <= 0.0) {
      make_leaf(item.node_id, item.begin, item.end, w_total, stat_sum);
      return;
    }

    const SplitCandidate best = find_best_split(item, w_total, stat_sum, stat_sq,
                                                parent_impurity);
    if (best.feature < 0 || best.gain <= 0.0) {
      make_leaf(item.node_id, item.begin, item.end, w_total, stat_sum);
      return;
    }

    if (importance_acc_) (*importance_acc_)[best.feature] += best.gain;

    // Stable partition: rows with x <= threshold first.
    std::size_t n_left = 0, n_right = 0;
    for (std::size_t i = item.begin; i < item.end; ++i) {
      const int row = rows_[i];
      if (X_(row, best.feature) <= best.threshold) {
        scratch_[n_left] = row;
        if (track_rows_) side_buf_[n_left] = order_of_row_[i];
        ++n_left;
      } else {
        scratch_[count - 1 - n_right] = row;
        if (track_rows_) side_buf_[count - 1 - n_right] = order_of_row_[i];
        ++n_right;
      }
    }
    std::reverse(scratch_.begin() + n_left, scratch_.begin() + count);
    std::copy(scratch_.begin(), scratch_.begin() + count, rows_.begin() + item.begin);
    if (track_rows_) {
      std::reverse(side_buf_.begin() + n_left, side_buf_.begin() + count);
      std::copy(side_buf_.begin(), side_buf_.begin() + count,
                order_of_row_.begin() + item.begin);
    }

    const int left_id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.push_back(TreeNode{});
    const int right_id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.push_back(TreeNode{});

    TreeNode& node = tree_.nodes[item.node_id];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left = left_id;
    node.right = right_id;

    stack.push_back({right_id, item.begin + n_left, item.end, item.depth + 1});
    stack.push_back({left_id, item.begin, item.begin + n_left, item.depth + 1});
  }

  SplitCandidate find_best_split(const PendingNode& item, double w_total, double stat_sum,
                                 double stat_sq, double parent_impurity) {
    const std::size_t count = item.end - item.begin;
    SplitCandidate best;

    int n_try = params_.max_features;
    if (n_try < 0 || n_try > static_cast<int>(d_)) n_try = static_cast<int>(d_);
    const bool sampled = n_try < static_cast<int>(d_);

    // Partial Fisher-Yates draw of candidate features without replacement.
    // A feature that is constant within the node does not consume a try, so
    // sampled splitters keep looking until n_try informative features were
    // inspected or the pool is exhausted.
    int tries_used = 0;
    for (std::size_t t = 0; t < d_ && tries_used < n_try; ++t) {
      const std::size_t j =
          t + (sampled ? static_cast<std::size_t>(rng_.uniform_int(d_ - t)) : 0);
      std::swap(feature_pool_[t], feature_pool_[j]);
      const int feature = feature_pool_[t];

      bool informative;
      if (params_.random_thresholds) {
        informative = try_random_threshold(item, feature, w_total, stat_sum, stat_sq,
                                           parent_impurity, best);
      } else {
        informative =
            try_exact_scan(item, feature, w_total, stat_sum, stat_sq, parent_impurity, count, best);
      }
      if (informative) ++tries_used;
    }
    return best;
  }

  bool try_exact_scan(const PendingNode& item, int feature, double w_total, double stat_sum,
                      double stat_sq, double parent_impurity, std::size_t count,
                      SplitCandidate& best) {
    samples_.resize(count);
    double lo = X_(rows_[item.begin], feature), hi = lo;
    for (std::size_t i = 0; i < count; ++i) {
      const int row = rows_[item.begin + i];
      const double v = X_(row, feature);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      samples_[i] = {v, target_of(row), weight_of(row)};
    }
    if (lo == hi) return false;  // constant within this node
    std::sort(samples_.begin(), samples_.end(),
              [](const Sample& a, const Sample& b) { return a.x < b.x; });

    const std::size_t msl = static_cast<std::size_t>(params_.min_samples_leaf);
    double wl = 0.0, sl = 0.0, ql = 0.0;
    for (std::size_t i = 0; i + 1 < count; ++i) {
      const Sample& s = samples_[i];
      wl += s.w;
      sl += s.w * s.y;
      ql += s.w * s.y * s.y;
      if (s.x == samples_[i + 1].x) continue;
      if (i + 1 < msl || count - i - 1 < msl) continue;

      const double wr = w_total - wl;
      const double sr = stat_sum - sl;
      double child_impurity;
      if (regression_) {
        child_impurity = impurity_reg(wl, sl, ql) + impurity_reg(wr, sr, stat_sq - ql);
      } else {
        child_impurity = impurity_cls(wl, sl) + impurity_cls(wr, sr);
      }
      const double gain = parent_impurity - child_impurity;

      double threshold = 0.5 * (s.x + samples_[i + 1].x);
      if (threshold >= samples_[i + 1].x) threshold = s.x;  // midpoint collapsed

      const SplitCandidate cand{gain, feature, threshold};
      if (cand.beats(best)) best = cand;
    }
    return true;
  }

  bool try_random_threshold(const PendingNode& item, int feature, double w_total,
                            double stat_sum, double stat_sq, double parent_impurity,
                            SplitCandidate& best) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = item.begin; i < item.end; ++i) {
      const double v = X_(rows_[i], feature);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (!(lo < hi)) return false;
    const double threshold = rng_.uniform(lo, hi);

    double wl = 0.0, sl = 0.0, ql = 0.0;
    std::size_t n_left = 0;
    for (std::size_t i = item.begin; i < item.end; ++i) {
      const int row = rows_[i];
      const double v = X_(row, feature);
      if (v <= threshold) {
        const double w = weight_of(row);
        const double t = target_of(row);
        wl += w;
        sl += w * t;
        ql += w * t * t;
        ++n_left;
      }
    }
    const std::size_t count = item.end - item.begin;
    const std::size_t msl = static_cast<std::size_t>(params_.min_samples_leaf);
    if (n_left < msl || count - n_left < msl || n_left == 0 || n_left == count) return true;

    double child_impurity;
    if (regression_) {
      child_impurity = impurity_reg(wl, sl, ql) +
                       impurity_reg(w_total - wl, stat_sum - sl, stat_sq - ql);
    } else {
      child_impurity = impurity_cls(wl, sl) + impurity_cls(w_total - wl, stat_sum - sl);
    }
    const SplitCandidate cand{parent_impurity - child_impurity, feature, threshold};
    if (cand.beats(best)) best = cand;
    return true;
  }

  Tree& tree_;
  const Matrix& X_;
  const TreeParams& params_;
  Rng& rng_;
  std::vector<double>* importance_acc_;
  bool regression_;

  std::vector<int> rows_;
  std::size_t d_;
  std::span<const int> y_class_;
  std::span<const double> weights_;
  std::span<const double> target_;

  std::vector<int> feature_pool_;
  std::vector<Sample> samples_;
  std::vector<int> scratch_;
  std::vector<int> side_buf_;

  bool track_rows_ = false;
  std::vector<int> order_of_row_;        // position in rows_ -> original rows index
  std::vector<int> leaf_id_of_position_;
};

}  // namespace

void Tree::fit_classification(const Matrix& X, std::span<const int> y,
                              std::span<const double> w, std::span<const int> rows,
                              const TreeParams& params, Rng& rng,
                              std::vector<double>* importance_acc) {
  TreeBuilder builder(*this, X, rows, params, rng, importance_acc, /*regression=*/false);
  builder.set_classification(y, w);
  builder.build(nullptr);
}

void Tree::fit_regression(const Matrix& X, std::span<const double> target,
                          std::span<const int> rows, const TreeParams& params, Rng& rng,
                          std::vector<double>* importance_acc, std::vector<int>* leaf_of_row) {
  TreeBuilder builder(*this, X, rows, params, rng, importance_acc, /*regression=*/true);
  builder.set_regression(target);
  if (leaf_of_row) builder.enable_row_tracking();
  builder.build(leaf_of_row);
}

double Tree::predict_row(std::span<const double> x) const {
  return nodes[leaf_index(x)].value;
}

int Tree::leaf_index(std::span<const double> x) const {
  int id = 0;
  while (!nodes[id].is_leaf()) {
    const TreeNode& node = nodes[id];
    id = x[node.feature] <= node.threshold ? node.left : node.right;
  }
  return id;
}

void Tree::save(BinaryWriter& w) const {
  w.u64(nodes.size());
  for (const TreeNode& n : nodes) {
    w.i32(n.feature);
    w.f64(n.threshold);
    w.i32(n.left);
    w.i32(n.right);
    w.f64(n.value);
  }
}

Tree Tree::load(BinaryReader& r) {
  Tree t;
  const std::uint64_t count = r.u64();
  t.nodes.resize(count);
  for (auto& n : t.nodes) {
    n.feature = r.i32();
    n.threshold = r.f64();
    n.left = r.i32();
    n.right = r.i32();
    n.value = r.f64();
  }
  return t;
}

}  // namespace phishstack
