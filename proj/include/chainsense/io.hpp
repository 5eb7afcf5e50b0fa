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

/// @file
/// File formats: JSON configuration, CSV readings, JSON or CSV reports,
/// and the process exit-code contract.
///
/// Configuration:
///
///   {
///     "sensors": [
///       {"id": 1, "name": "T1", "unit": "degC", "min": 0, "max": 120,
///        "cluster": "boiler"}, ...
///     ],
///     "engine": {"threshold": 0.01, "trace_mode": "survivors",
///                "max_sensors_guard": 10}
///   }
///
/// "name", "unit", "trace_mode" and "max_sensors_guard" are optional.
/// Sensor order inside a cluster is its position on the circle.
///
/// Readings: CSV with header `timestamp,sensor_id,raw_value`, one row per
/// sensor per cycle. Rows are grouped into frames by timestamp.

#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "chainsense/coupling.hpp"
#include "chainsense/detail/format.hpp"
#include "chainsense/error.hpp"
#include "chainsense/model.hpp"
#include "chainsense/orchestrator.hpp"

namespace chainsense {

namespace detail {

using ojson = nlohmann::ordered_json;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path + ": cannot open for writing");
  out << content;
  if (!out) throw Error(path + ": write failed");
}

inline std::string line_col(std::string_view text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < offset && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

class FieldReader {
 public:
  FieldReader(const std::string& file, const nlohmann::json& node,
              std::string path, std::initializer_list<std::string_view> known)
      : file_(file), node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail("", "expected an object");
    for (const auto& [key, value] : node_.items()) {
      bool ok = false;
      for (std::string_view k : known) ok = ok || k == key;
      if (!ok) fail(key, "unknown field");
    }
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  double number(const std::string& key) const {
    const auto& v = require(key);
    if (!v.is_number()) fail(key, "expected a number");
    return v.get<double>();
  }

  int integer(const std::string& key) const {
    const auto& v = require(key);
    if (!v.is_number_integer()) fail(key, "expected an integer");
    return v.get<int>();
  }

  std::string text(const std::string& key) const {
    const auto& v = require(key);
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    std::string where = path_;
    if (!key.empty()) where += (where.empty() ? "" : ".") + key;
    throw ParseError(file_ + ": " + where + ": " + what);
  }

 private:
  const nlohmann::json& require(const std::string& key) const {
    if (!node_.contains(key)) fail(key, "missing required field");
    return node_.at(key);
  }

  const std::string& file_;
  const nlohmann::json& node_;
  std::string path_;
};

}  // namespace detail

/// Parses and validates a configuration document. `origin` names the source
/// in error messages.
inline Model parse_config(const std::string& text,
                          const std::string& origin = "<config>") {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(origin + ":" + detail::line_col(text, e.byte - 1) +
                     ": malformed JSON: " + e.what());
  }
  detail::FieldReader root(origin, doc, "", {"sensors", "engine"});
  if (!doc.contains("sensors") || !doc["sensors"].is_array())
    root.fail("sensors", "expected an array of sensors");

  std::vector<SensorSpec> specs;
  const auto& sensors = doc["sensors"];
  for (std::size_t k = 0; k < sensors.size(); ++k) {
    detail::FieldReader s(origin, sensors[k],
                          "sensors[" + std::to_string(k) + "]",
                          {"id", "name", "unit", "min", "max", "cluster"});
    SensorSpec spec;
    spec.id = s.integer("id");
    spec.name = s.has("name") ? s.text("name") : "s" + std::to_string(spec.id);
    spec.unit = s.has("unit") ? s.text("unit") : "";
    spec.x_min = s.number("min");
    spec.x_max = s.number("max");
    spec.cluster_id = s.text("cluster");
    specs.push_back(std::move(spec));
  }

  EngineConfig cfg;
  if (!doc.contains("engine")) root.fail("engine", "missing required field");
  detail::FieldReader engine(origin, doc["engine"], "engine",
                             {"threshold", "trace_mode", "max_sensors_guard"});
  cfg.threshold = engine.number("threshold");
  if (engine.has("trace_mode")) {
    try {
      cfg.trace_mode = parse_trace_mode(engine.text("trace_mode"));
    } catch (const ValidationError& e) {
      engine.fail("trace_mode", e.what());
    }
  }
  if (engine.has("max_sensors_guard"))
    cfg.max_sensors_guard = engine.integer("max_sensors_guard");

  try {
    return validate_config(specs, cfg);
  } catch (const ValidationError& e) {
    throw ValidationError(origin + ": " + e.what());
  }
}

inline Model load_config(const std::string& path) {
  return parse_config(detail::read_file(path), path);
}

inline std::string config_to_json(const Model& model) {
  detail::ojson doc;
  doc["sensors"] = detail::ojson::array();
  for (const SensorSpec& s : model.specs()) {
    doc["sensors"].push_back({{"id", s.id},
                              {"name", s.name},
                              {"unit", s.unit},
                              {"min", s.x_min},
                              {"max", s.x_max},
                              {"cluster", s.cluster_id}});
  }
  const EngineConfig& cfg = model.config();
  doc["engine"] = {{"threshold", cfg.threshold},
                   {"trace_mode", std::string(to_string(cfg.trace_mode))},
                   {"max_sensors_guard", cfg.max_sensors_guard}};
  return doc.dump(2) + "\n";
}

inline void save_config(const Model& model, const std::string& path) {
  detail::write_file(path, config_to_json(model));
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  if (text.empty()) return false;
  if constexpr (std::is_floating_point_v<T>) {
    // from_chars rejects a leading '+'.
    if (text.front() == '+') text.remove_prefix(1);
  }
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace detail

/// Parses readings CSV into frames ordered by timestamp.
inline std::vector<ReadingFrame> parse_readings(
    const std::string& text, const std::string& origin = "<readings>") {
  std::map<std::int64_t, ReadingFrame> frames;
  std::istringstream in(text);
  std::string raw_line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, raw_line)) {
    ++line_no;
    const std::string_view line = detail::trim(raw_line);
    if (line.empty() || line.front() == '#') continue;
    const auto where = origin + ":" + std::to_string(line_no) + ": ";
    const auto cells = detail::split_csv(line);
    if (!header_seen) {
      if (cells.size() != 3 || cells[0] != "timestamp" ||
          cells[1] != "sensor_id" || cells[2] != "raw_value")
        throw ParseError(where +
                         "expected header 'timestamp,sensor_id,raw_value'");
      header_seen = true;
      continue;
    }
    if (cells.size() != 3)
      throw ParseError(where + "expected 3 fields, found " +
                       std::to_string(cells.size()));
    std::int64_t timestamp = 0;
    int sensor = 0;
    double value = 0;
    if (!detail::parse_number(cells[0], timestamp))
      throw ParseError(where + "bad timestamp '" + std::string(cells[0]) + "'");
    if (!detail::parse_number(cells[1], sensor))
      throw ParseError(where + "bad sensor_id '" + std::string(cells[1]) + "'");
    if (!detail::parse_number(cells[2], value))
      throw ParseError(where + "bad raw_value '" + std::string(cells[2]) + "'");
    ReadingFrame& frame = frames[timestamp];
    frame.timestamp = timestamp;
    if (!frame.values.emplace(sensor, value).second)
      throw ParseError(where + "duplicate reading for sensor " +
                       std::to_string(sensor) + " at timestamp " +
                       std::to_string(timestamp));
  }
  if (!header_seen) throw ParseError(origin + ": empty readings file");

  std::vector<ReadingFrame> out;
  out.reserve(frames.size());
  for (auto& [t, frame] : frames) out.push_back(std::move(frame));
  return out;
}

inline std::vector<ReadingFrame> load_readings(const std::string& path) {
  return parse_readings(detail::read_file(path), path);
}

inline std::string readings_to_csv(std::span<const ReadingFrame> frames) {
  std::string out = "timestamp,sensor_id,raw_value\n";
  for (const ReadingFrame& frame : frames) {
    for (const auto& [id, value] : frame.values) {
      out += std::to_string(frame.timestamp) + "," + std::to_string(id) + "," +
             detail::format_real(value) + "\n";
    }
  }
  return out;
}

enum class ReportFormat { kJson, kCsv };

inline ReportFormat parse_report_format(std::string_view text) {
  if (text == "json") return ReportFormat::kJson;
  if (text == "csv") return ReportFormat::kCsv;
  throw ValidationError("unknown report format '" + std::string(text) +
                        "' (expected json or csv)");
}

/// JSON report document. Field order is fixed; detail follows trace_mode.
inline std::string report_to_json(std::span<const CycleResult> results,
                                  const Model& model) {
  using detail::ojson;
  const EngineConfig& cfg = model.config();
  ojson doc;
  doc["format"] = "chainsense-report/1";
  doc["threshold"] = cfg.threshold;
  doc["trace_mode"] = std::string(to_string(cfg.trace_mode));
  bool alarm = false;
  ojson cycles = ojson::array();
  for (const CycleResult& r : results) {
    ojson cycle;
    cycle["timestamp"] = r.timestamp;
    if (!r.ok()) {
      cycle["error"] = r.error;
      cycles.push_back(std::move(cycle));
      continue;
    }
    cycle["alarm"] = r.report->alarm;
    alarm = alarm || r.report->alarm;
    ojson clusters = ojson::array();
    for (const ClusterReport& c : r.report->clusters) {
      ojson cluster;
      cluster["cluster"] = c.cluster_id;
      cluster["sensor_ids"] = c.sensor_ids;
      cluster["evaluated"] = c.evaluated;
      cluster["pruned"] = c.pruned;
      cluster["survivors"] = c.survivors;
      cluster["alarm"] = c.alarm;
      if (cfg.trace_mode != TraceMode::kNone) {
        ojson list = ojson::array();
        for (const SurvivorRecord& s : c.survivor_list)
          list.push_back({{"sequence", s.sequence}, {"final", s.final_value}});
        cluster["survivor_sequences"] = std::move(list);
      }
      if (cfg.trace_mode == TraceMode::kFull) {
        ojson traces = ojson::array();
        for (const EvaluationTrace& t : c.traces) {
          ojson trace;
          trace["sequence"] = t.sequence;
          trace["levels"] = t.levels;
          trace["status"] = t.survived() ? "survived" : "pruned";
          if (!t.survived()) trace["pruned_at"] = t.pruned_at;
          traces.push_back(std::move(trace));
        }
        cluster["traces"] = std::move(traces);
      }
      clusters.push_back(std::move(cluster));
    }
    cycle["clusters"] = std::move(clusters);
    cycles.push_back(std::move(cycle));
  }
  doc["alarm"] = alarm;
  doc["cycles"] = std::move(cycles);
  return doc.dump(2) + "\n";
}

/// One row per cycle x cluster; failed cycles get a single row carrying the
/// error text and an empty cluster column.
inline std::string report_to_csv(std::span<const CycleResult> results) {
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char ch : s) {
      if (ch == '"') q += '"';
      q += ch;
    }
    return q + "\"";
  };
  std::string out = "timestamp,cluster,evaluated,pruned,survivors,alarm,error\n";
  for (const CycleResult& r : results) {
    const std::string t = std::to_string(r.timestamp);
    if (!r.ok()) {
      out += t + ",,0,0,0,0," + quote(r.error) + "\n";
      continue;
    }
    for (const ClusterReport& c : r.report->clusters) {
      out += t + "," + c.cluster_id + "," + std::to_string(c.evaluated) + "," +
             std::to_string(c.pruned) + "," + std::to_string(c.survivors) +
             "," + (c.alarm ? "1" : "0") + ",\n";
    }
  }
  return out;
}

/// Writes the report to `path` ("-" for stdout).
inline void emit_report(std::span<const CycleResult> results,
                        const Model& model, ReportFormat format,
                        const std::string& path) {
  detail::write_file(path, format == ReportFormat::kJson
                               ? report_to_json(results, model)
                               : report_to_csv(results));
}

/// Coupling tables of every cluster. A single-cluster model writes `path`
/// as is; otherwise each cluster goes to `<stem>.<cluster><ext>`.
inline std::vector<std::string> dump_couplings(const Model& model,
                                               const std::string& path) {
  std::vector<std::string> written;
  const auto& clusters = model.clusters();
  for (const ClusterLayout& c : clusters) {
    std::string target = path;
    if (clusters.size() > 1) {
      const std::size_t dot = path.find_last_of('.');
      const std::size_t slash = path.find_last_of('/');
      const bool has_ext =
          dot != std::string::npos && (slash == std::string::npos || dot > slash);
      target = has_ext ? path.substr(0, dot) + "." + c.id + path.substr(dot)
                       : path + "." + c.id;
    }
    detail::write_file(target,
                       build_table(static_cast<int>(c.size())).to_csv());
    written.push_back(target);
  }
  return written;
}

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitAlarm = 2;

/// 2 if any cycle raised an alarm, else 1 if any cycle failed, else 0.
inline int exit_code(std::span<const CycleResult> results) {
  bool failed = false;
  for (const CycleResult& r : results) {
    if (r.ok() && r.report->alarm) return kExitAlarm;
    failed = failed || !r.ok();
  }
  return failed ? kExitError : kExitOk;
}

}  // namespace chainsense
