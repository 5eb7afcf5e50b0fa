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
/// Sensor and engine configuration, validation, and normalization of raw
/// readings onto the unit scale.
///
/// Every sensor carries a globally unique id. Within its cluster a sensor
/// also has a canonical index 1..n taken from configuration order; that
/// order is the sensor's position on the circle and is never re-sorted.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chainsense/error.hpp"

namespace chainsense {

enum class TraceMode { kNone, kSurvivors, kFull };

inline std::string_view to_string(TraceMode mode) {
  switch (mode) {
    case TraceMode::kNone:
      return "none";
    case TraceMode::kSurvivors:
      return "survivors";
    case TraceMode::kFull:
      return "full";
  }
  return "none";
}

inline TraceMode parse_trace_mode(std::string_view text) {
  if (text == "none") return TraceMode::kNone;
  if (text == "survivors") return TraceMode::kSurvivors;
  if (text == "full") return TraceMode::kFull;
  throw ValidationError("unknown trace mode '" + std::string(text) +
                        "' (expected none, survivors or full)");
}

struct SensorSpec {
  int id = 0;
  std::string name;
  std::string unit;  ///< Informational only.
  double x_min = 0;
  double x_max = 1;
  std::string cluster_id;

  bool operator==(const SensorSpec&) const = default;
};

struct EngineConfig {
  double threshold = 0.5;  ///< Must lie in the open interval (0, 1).
  int max_sensors_guard = 10;
  TraceMode trace_mode = TraceMode::kSurvivors;

  bool operator==(const EngineConfig&) const = default;
};

/// One acquisition cycle of raw readings, keyed by sensor id.
struct ReadingFrame {
  std::int64_t timestamp = 0;
  std::map<int, double> values;

  bool operator==(const ReadingFrame&) const = default;
};

/// Readings mapped onto [0, 1], keyed by sensor id.
struct NormalizedFrame {
  std::int64_t timestamp = 0;
  std::map<int, double> values;
};

/// Sensor ids of one cluster in canonical order: element k has canonical
/// index k + 1.
struct ClusterLayout {
  std::string id;
  std::vector<int> sensor_ids;

  std::size_t size() const noexcept { return sensor_ids.size(); }
  bool operator==(const ClusterLayout&) const = default;
};

/// A configuration that passed validate_config(). Immutable.
class Model {
 public:
  const std::vector<SensorSpec>& specs() const noexcept { return specs_; }
  const EngineConfig& config() const noexcept { return config_; }
  /// Clusters in order of first appearance in the configuration.
  const std::vector<ClusterLayout>& clusters() const noexcept {
    return clusters_;
  }

  const SensorSpec& sensor(int id) const {
    auto it = by_id_.find(id);
    if (it == by_id_.end())
      throw DomainError("unknown sensor id " + std::to_string(id));
    return specs_[it->second];
  }

  bool has_sensor(int id) const { return by_id_.count(id) != 0; }

  bool operator==(const Model& other) const {
    return specs_ == other.specs_ && config_ == other.config_ &&
           clusters_ == other.clusters_;
  }

 private:
  friend Model validate_config(std::span<const SensorSpec>,
                               const EngineConfig&);

  std::vector<SensorSpec> specs_;
  EngineConfig config_;
  std::vector<ClusterLayout> clusters_;
  std::map<int, std::size_t> by_id_;
};

/// Checks every configuration invariant and builds the canonical model.
///
/// Rejects: an empty sensor list, duplicate ids, an empty cluster id,
/// non-finite or degenerate ranges (x_min >= x_max), a threshold outside
/// (0, 1), and a non-positive size guard.
inline Model validate_config(std::span<const SensorSpec> specs,
                             const EngineConfig& cfg) {
  if (!(cfg.threshold > 0.0 && cfg.threshold < 1.0))
    throw ValidationError("threshold out of open interval (0, 1): " +
                          std::to_string(cfg.threshold));
  if (cfg.max_sensors_guard < 1)
    throw ValidationError("max_sensors_guard must be at least 1");
  if (specs.empty()) throw ValidationError("empty cluster: no sensors");

  Model model;
  model.config_ = cfg;
  for (const SensorSpec& spec : specs) {
    const std::string who = "sensor " + std::to_string(spec.id);
    if (!std::isfinite(spec.x_min) || !std::isfinite(spec.x_max))
      throw ValidationError(who + ": non-finite range");
    if (spec.x_min == spec.x_max)
      throw ValidationError(who + ": degenerate range (min == max)");
    if (spec.x_min > spec.x_max)
      throw ValidationError(who + ": degenerate range (min > max)");
    if (spec.cluster_id.empty())
      throw ValidationError(who + ": empty cluster id");
    if (!model.by_id_.emplace(spec.id, model.specs_.size()).second)
      throw ValidationError("duplicate sensor id " + std::to_string(spec.id));
    model.specs_.push_back(spec);

    auto it = std::find_if(
        model.clusters_.begin(), model.clusters_.end(),
        [&](const ClusterLayout& c) { return c.id == spec.cluster_id; });
    if (it == model.clusters_.end()) {
      model.clusters_.push_back({spec.cluster_id, {}});
      it = std::prev(model.clusters_.end());
    }
    it->sensor_ids.push_back(spec.id);
  }
  return model;
}

inline Model validate_config(const std::vector<SensorSpec>& specs,
                             const EngineConfig& cfg) {
  return validate_config(std::span<const SensorSpec>(specs), cfg);
}

/// f = 1 / |x_max - x_min|.
inline double normalization_factor(const SensorSpec& spec) {
  if (!(spec.x_min < spec.x_max))
    throw ValidationError("sensor " + std::to_string(spec.id) +
                          ": degenerate range");
  return 1.0 / std::fabs(spec.x_max - spec.x_min);
}

/// Maps a raw reading onto [0, 1]. Out-of-range readings are rejected, never
/// clamped.
///
/// Computed as (x - x_min) / width, which equals f * (x - x_min) but maps
/// x_max to exactly 1 and can never round past it.
inline double normalize_value(const SensorSpec& spec, double raw) {
  if (!(raw >= spec.x_min && raw <= spec.x_max))
    throw RangeError("sensor " + std::to_string(spec.id) + " (" + spec.name +
                         "): reading " + std::to_string(raw) +
                         " outside [" + std::to_string(spec.x_min) + ", " +
                         std::to_string(spec.x_max) + "]",
                     spec.id);
  return (raw - spec.x_min) / std::fabs(spec.x_max - spec.x_min);
}

/// Normalizes a complete frame. Missing and unknown sensors are errors.
inline NormalizedFrame normalize_frame(const ReadingFrame& frame,
                                       const Model& model) {
  NormalizedFrame out;
  out.timestamp = frame.timestamp;
  for (const auto& [id, raw] : frame.values) {
    if (!model.has_sensor(id))
      throw RangeError("reading for unknown sensor " + std::to_string(id), id);
  }
  for (const SensorSpec& spec : model.specs()) {
    auto it = frame.values.find(spec.id);
    if (it == frame.values.end())
      throw RangeError("missing reading for sensor " +
                           std::to_string(spec.id) + " (" + spec.name + ")",
                       spec.id);
    out.values.emplace(spec.id, normalize_value(spec, it->second));
  }
  return out;
}

/// Normalized values of one cluster in canonical order.
inline std::vector<double> cluster_values(const NormalizedFrame& frame,
                                          const ClusterLayout& cluster) {
  std::vector<double> values;
  values.reserve(cluster.size());
  for (int id : cluster.sensor_ids) values.push_back(frame.values.at(id));
  return values;
}

}  // namespace chainsense
