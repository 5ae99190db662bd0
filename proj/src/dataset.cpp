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

#include "phishstack/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "phishstack/errors.hpp"
#include "phishstack/rng.hpp"

namespace phishstack {

namespace {

std::string trim(const std::string& s) {
  const char* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  cells.push_back(cur);
  return cells;
}

double parse_cell(const std::string& raw, std::size_t row, const std::string& col) {
  const std::string s = trim(raw);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) {
    throw NonNumericCellError("non-numeric cell \"" + raw + "\" at data row " +
                              std::to_string(row) + ", column \"" + col + "\"");
  }
  return value;
}

}  // namespace

void DatasetSchema::validate() const {
  if (feature_columns.empty()) throw ConfigError("schema: feature_columns is empty");
  std::set<std::string> seen;
  for (const auto& c : feature_columns) {
    if (c.empty()) throw ConfigError("schema: empty feature column name");
    if (!seen.insert(c).second) throw ConfigError("schema: duplicate feature column \"" + c + "\"");
  }
  if (label_column.empty()) throw ConfigError("schema: label_column is empty");
  if (seen.count(label_column)) {
    throw ConfigError("schema: label column \"" + label_column + "\" is also a feature column");
  }
  if (positive_label_value == negative_label_value) {
    throw ConfigError("schema: positive and negative label values are both \"" +
                      positive_label_value + "\"");
  }
}

std::uint64_t DatasetSchema::hash() const {
  // FNV-1a over a canonical rendering.
  std::uint64_t h = 1469598103934665603ULL;
  auto feed = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    h ^= 0x1f;
    h *= 1099511628211ULL;
  };
  feed(label_column);
  feed(positive_label_value);
  feed(negative_label_value);
  for (const auto& c : feature_columns) feed(c);
  return h;
}

DatasetSchema DatasetSchema::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open schema file: " + path);

  DatasetSchema schema;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line.erase(hash_pos);
    const std::string text = trim(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key == "label_column") {
      schema.label_column = value;
    } else if (key == "positive_label_value") {
      schema.positive_label_value = value;
    } else if (key == "negative_label_value") {
      schema.negative_label_value = value;
    } else if (key == "expected_positive_count") {
      schema.expected_positive_count = std::stoll(value);
    } else if (key == "expected_negative_count") {
      schema.expected_negative_count = std::stoll(value);
    } else if (key == "feature_columns") {
      for (const auto& name : split_csv_line(value)) {
        const std::string t = trim(name);
        if (!t.empty()) schema.feature_columns.push_back(t);
      }
    } else {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": unknown key \"" + key + "\"");
    }
  }
  schema.validate();
  return schema;
}

void Dataset::validate() const {
  if (labels.size() != features.rows()) {
    throw Error("dataset: " + std::to_string(labels.size()) + " labels for " +
                std::to_string(features.rows()) + " rows");
  }
  if (feature_names.size() != features.cols()) {
    throw Error("dataset: " + std::to_string(feature_names.size()) + " names for " +
                std::to_string(features.cols()) + " columns");
  }
  bool has_pos = false, has_neg = false;
  for (int v : labels) {
    if (v == 1) {
      has_pos = true;
    } else if (v == 0) {
      has_neg = true;
    } else {
      throw Error("dataset: label value " + std::to_string(v) + " outside {0,1}");
    }
  }
  if (!has_pos || !has_neg) throw Error("dataset: both classes must be present");
  for (double v : features.data()) {
    if (!std::isfinite(v)) throw Error("dataset: non-finite feature value");
  }
}

Dataset load_csv(const std::string& path, const DatasetSchema& schema,
                 std::vector<std::string>* warnings) {
  schema.validate();
  std::ifstream in(path);
  if (!in) throw IoError("cannot open CSV file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw EmptyDatasetError("empty file: " + path);
  const std::vector<std::string> header = split_csv_line(line);

  auto column_index = [&](const std::string& name) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (trim(header[i]) == name) return i;
    }
    throw MissingColumnError("column \"" + name + "\" not found in " + path);
  };

  std::vector<std::size_t> feature_idx;
  feature_idx.reserve(schema.feature_columns.size());
  for (const auto& name : schema.feature_columns) feature_idx.push_back(column_index(name));
  const std::size_t label_idx = column_index(schema.label_column);

  const std::size_t d = schema.feature_columns.size();
  std::vector<double> values;
  std::vector<int> labels;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw NonNumericCellError("data row " + std::to_string(row) + " has " +
                                std::to_string(cells.size()) + " cells, header has " +
                                std::to_string(header.size()));
    }
    for (std::size_t j = 0; j < d; ++j) {
      values.push_back(parse_cell(cells[feature_idx[j]], row, schema.feature_columns[j]));
    }
    const std::string raw_label = trim(cells[label_idx]);
    if (raw_label == schema.positive_label_value) {
      labels.push_back(1);
    } else if (raw_label == schema.negative_label_value) {
      labels.push_back(0);
    } else {
      throw UnknownLabelValueError("unknown label value \"" + raw_label + "\" at data row " +
                                   std::to_string(row));
    }
    ++row;
  }
  if (row == 0) throw EmptyDatasetError("no data rows in " + path);

  Dataset ds;
  ds.features = Matrix(row, d);
  ds.features.data() = std::move(values);
  ds.labels = std::move(labels);
  ds.feature_names = schema.feature_columns;
  ds.provenance = path;
  ds.validate();

  if (warnings) {
    std::int64_t n_pos = 0;
    for (int v : ds.labels) n_pos += v;
    const std::int64_t n_neg = static_cast<std::int64_t>(ds.n()) - n_pos;
    if (schema.expected_positive_count && *schema.expected_positive_count != n_pos) {
      warnings->push_back("expected " + std::to_string(*schema.expected_positive_count) +
                          " positive (phishing) rows but found " + std::to_string(n_pos) +
                          "; check the schema's label mapping");
    }
    if (schema.expected_negative_count && *schema.expected_negative_count != n_neg) {
      warnings->push_back("expected " + std::to_string(*schema.expected_negative_count) +
                          " negative (legitimate) rows but found " + std::to_string(n_neg));
    }
  }
  return ds;
}

FoldPlan stratified_kfold(const Dataset& ds, int k, std::uint64_t seed) {
  return stratified_kfold_labels(ds.labels, k, seed);
}

FoldPlan stratified_kfold_labels(std::span<const int> labels, int k, std::uint64_t seed) {
  if (k < 2) throw Error("stratified_kfold: k must be >= 2, got " + std::to_string(k));
  std::vector<int> pos_rows, neg_rows;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    (labels[i] == 1 ? pos_rows : neg_rows).push_back(static_cast<int>(i));
  }
  if (pos_rows.size() < static_cast<std::size_t>(k) ||
      neg_rows.size() < static_cast<std::size_t>(k)) {
    throw TooFewSamplesPerClassError(
        "stratified_kfold: each class needs at least k=" + std::to_string(k) +
        " members (have " + std::to_string(pos_rows.size()) + " positive, " +
        std::to_string(neg_rows.size()) + " negative)");
  }

  // Per-fold quota for each class, derived by dealing the class-sorted label
  // sequence round-robin across folds. This keeps total fold sizes within one
  // of each other while also balancing each class.
  const std::size_t n = labels.size();
  const std::size_t n_neg = neg_rows.size();
  std::vector<std::size_t> quota_pos(k, 0), quota_neg(k, 0);
  for (int f = 0; f < k; ++f) {
    for (std::size_t p = static_cast<std::size_t>(f); p < n; p += k) {
      (p < n_neg ? quota_neg[f] : quota_pos[f]) += 1;
    }
  }

  Rng rng(mix_seed(seed, 0x5f01d));
  rng.shuffle(std::span<int>(neg_rows));
  rng.shuffle(std::span<int>(pos_rows));

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.assignment.assign(n, -1);
  std::size_t cursor = 0;
  for (int f = 0; f < k; ++f) {
    for (std::size_t c = 0; c < quota_neg[f]; ++c) plan.assignment[neg_rows[cursor++]] = f;
  }
  cursor = 0;
  for (int f = 0; f < k; ++f) {
    for (std::size_t c = 0; c < quota_pos[f]; ++c) plan.assignment[pos_rows[cursor++]] = f;
  }
  return plan;
}

std::pair<Dataset, Dataset> split_by_fold(const Dataset& ds, const FoldPlan& plan,
                                          int test_fold) {
  if (test_fold < 0 || test_fold >= plan.k) {
    throw FoldIndexOutOfRangeError("split_by_fold: test fold " + std::to_string(test_fold) +
                                   " outside [0, " + std::to_string(plan.k) + ")");
  }
  if (plan.assignment.size() != ds.n()) {
    throw Error("split_by_fold: fold plan covers " + std::to_string(plan.assignment.size()) +
                " rows, dataset has " + std::to_string(ds.n()));
  }
  std::vector<int> train_rows, test_rows;
  for (std::size_t i = 0; i < ds.n(); ++i) {
    (plan.assignment[i] == test_fold ? test_rows : train_rows).push_back(static_cast<int>(i));
  }

  auto subset = [&ds](const std::vector<int>& rows) {
    Dataset out;
    out.features = ds.features.take_rows(rows);
    out.labels.reserve(rows.size());
    for (int r : rows) out.labels.push_back(ds.labels[r]);
    out.feature_names = ds.feature_names;
    out.provenance = ds.provenance;
    return out;
  };
  return {subset(train_rows), subset(test_rows)};
}

}  // namespace phishstack
