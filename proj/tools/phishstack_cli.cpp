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

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "phishstack/errors.hpp"
#include "phishstack/runner.hpp"

namespace {

int cmd_run(const std::string& config_path) {
  using namespace phishstack;
  ExperimentConfig cfg = ExperimentConfig::load(config_path);
  if (cfg.output_dir.empty()) {
    cfg.output_dir = (std::filesystem::path(config_path).parent_path() / "out").string();
  }
  const ExperimentResult result = run_experiment(cfg);
  emit_report(result, cfg.output_dir);

  std::cout << "results written to " << cfg.output_dir << "\n\n";
  std::cout << render_report(cfg.output_dir);
  std::printf("\nstacked mean accuracy: %s%%  (total %.1f s)\n",
              percent2(result.stacked_summary.accuracy).c_str(), result.total_seconds);
  return 0;
}

int cmd_report(const std::string& result_dir) {
  std::cout << phishstack::render_report(result_dir);
  return 0;
}

int cmd_predict(const std::string& model_path, const std::string& data_path,
                const std::string& schema_path, double threshold) {
  const auto result = phishstack::predict_batch(model_path, data_path, schema_path, threshold);
  std::cout << phishstack::render_predictions(result, threshold);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stacking-ensemble phishing website detector"};
  app.require_subcommand(1);

  std::string config_path;
  CLI::App* run = app.add_subcommand("run", "Run the full cross-validated experiment");
  run->add_option("--config", config_path, "Experiment config file")->required();

  std::string result_dir;
  CLI::App* report = app.add_subcommand("report", "Render summary tables from a result directory");
  report->add_option("--result", result_dir, "Directory written by `run`")->required();

  std::string model_path, data_path, schema_path;
  double threshold = 0.5;
  CLI::App* predict = app.add_subcommand("predict", "Score a CSV through a saved model");
  predict->add_option("--model", model_path, "Model file (.psm)")->required();
  predict->add_option("--data", data_path, "CSV of feature rows")->required();
  predict->add_option("--schema", schema_path, "Dataset schema file")->required();
  predict->add_option("--threshold", threshold, "Decision cutoff (predict phishing iff p > t)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path);
    if (report->parsed()) return cmd_report(result_dir);
    if (predict->parsed()) return cmd_predict(model_path, data_path, schema_path, threshold);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
