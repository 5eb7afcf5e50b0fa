// Copyright 2026 The chainsense Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// chainsense: exhaustive chain evaluation of sensor readings, one full
// evaluation per acquisition cycle.
//
// Exit codes: 0 ran without alarm, 2 ran and raised an alarm, 1 error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "chainsense.hpp"

namespace {

std::vector<int> parse_layout(const std::string& text) {
  std::vector<int> layout;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = text.find(',', start);
    const std::string cell = text.substr(start, comma - start);
    try {
      std::size_t used = 0;
      layout.push_back(std::stoi(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw chainsense::ValidationError("bad layout '" + text +
                                        "' (expected e.g. 4,3)");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return layout;
}

int run(int argc, char** argv) {
  CLI::App app{"Exhaustive-search evaluation of hybrid sensor networks"};

  std::string config_path;
  std::string readings_path;
  std::string layout_text;
  bool synthetic = false;
  chainsense::RunManifest manifest;
  std::vector<std::string> anomaly_texts;
  std::optional<double> threshold;
  std::optional<std::string> trace_mode;
  std::optional<int> guard;
  bool allow_large = false;
  std::string dump_path;
  int workers = 1;
  std::string format = "json";
  std::string output = "-";
  bool fail_fast = false;
  std::string write_config_path;
  std::string write_readings_path;

  app.add_option("-c,--config", config_path, "Sensor configuration (JSON)");
  app.add_option("-r,--readings", readings_path,
                 "Readings CSV: timestamp,sensor_id,raw_value");
  app.add_flag("--synthetic", synthetic, "Generate seeded synthetic readings");
  app.add_option("--layout", layout_text,
                 "Synthetic sensor layout, sensors per cluster (e.g. 4,3)");
  app.add_option("--cycles", manifest.cycles, "Synthetic cycle count")
      ->capture_default_str();
  app.add_option("--seed", manifest.seed, "Synthetic RNG seed")
      ->capture_default_str();
  app.add_option("--baseline", manifest.baseline,
                 "Synthetic baseline as a fraction of each range")
      ->capture_default_str();
  app.add_option("--anomaly", anomaly_texts,
                 "Inject sensor:cycle[:magnitude] (repeatable)");
  app.add_option("--threshold", threshold, "Override the engine threshold");
  app.add_option("--trace-mode", trace_mode, "none | survivors | full");
  app.add_option("--guard", guard, "Override max_sensors_guard");
  app.add_flag("--allow-large", allow_large,
               "Evaluate clusters above the size guard");
  app.add_option("--dump-couplings", dump_path,
                 "Write coupling matrices as CSV");
  app.add_option("-j,--workers", workers, "Worker threads per cluster")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--format", format, "Report format: json | csv")
      ->capture_default_str();
  app.add_option("-o,--output", output, "Report path ('-' for stdout)")
      ->capture_default_str();
  app.add_flag("--fail-fast", fail_fast, "Stop at the first failing cycle");
  app.add_option("--write-config", write_config_path,
                 "Write the effective configuration (JSON)");
  app.add_option("--write-readings", write_readings_path,
                 "Write the readings used (CSV)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? chainsense::kExitOk : chainsense::kExitError;
  }

  const auto report_format = chainsense::parse_report_format(format);
  if (!layout_text.empty()) synthetic = true;
  if (synthetic && !readings_path.empty())
    throw chainsense::ValidationError(
        "--readings cannot be combined with synthetic generation");
  if (!synthetic && readings_path.empty() && dump_path.empty())
    throw chainsense::ValidationError(
        "no readings: pass --readings or --synthetic");

  std::optional<chainsense::Model> model;
  if (!config_path.empty()) {
    model = chainsense::load_config(config_path);
  } else if (!layout_text.empty()) {
    chainsense::EngineConfig cfg;
    cfg.threshold = 0.01;
    model = chainsense::synthetic_model(parse_layout(layout_text), cfg);
  } else {
    throw chainsense::ValidationError("pass --config or --layout");
  }

  chainsense::EngineConfig cfg = model->config();
  if (threshold) cfg.threshold = *threshold;
  if (trace_mode) cfg.trace_mode = chainsense::parse_trace_mode(*trace_mode);
  if (guard) cfg.max_sensors_guard = *guard;
  model = chainsense::validate_config(model->specs(), cfg);

  if (!write_config_path.empty())
    chainsense::save_config(*model, write_config_path);
  if (!dump_path.empty()) {
    for (const std::string& path : chainsense::dump_couplings(*model, dump_path))
      if (path != "-") std::cerr << "wrote " << path << "\n";
    if (!synthetic && readings_path.empty()) return chainsense::kExitOk;
  }

  std::vector<chainsense::ReadingFrame> frames;
  if (synthetic) {
    for (const std::string& text : anomaly_texts)
      manifest.anomalies.push_back(chainsense::parse_anomaly(text));
    frames = chainsense::generate_synthetic(manifest, *model);
  } else {
    if (!anomaly_texts.empty())
      throw chainsense::ValidationError("--anomaly requires synthetic mode");
    frames = chainsense::load_readings(readings_path);
  }
  if (!write_readings_path.empty()) {
    std::ofstream out(write_readings_path, std::ios::binary);
    out << chainsense::readings_to_csv(frames);
    if (!out)
      throw chainsense::Error(write_readings_path + ": cannot write readings");
  }

  chainsense::RunOptions options;
  options.workers = workers;
  options.allow_large = allow_large;
  const auto results =
      chainsense::run_stream(frames, *model, options, fail_fast);
  chainsense::emit_report(results, *model, report_format, output);
  for (const auto& r : results)
    if (!r.ok())
      std::cerr << "cycle " << r.timestamp << ": " << r.error << "\n";
  return chainsense::exit_code(results);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "chainsense: " << e.what() << "\n";
    return chainsense::kExitError;
  }
}
