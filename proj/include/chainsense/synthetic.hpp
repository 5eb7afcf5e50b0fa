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
/// Seeded synthetic acquisition for exercising the engine without hardware.
///
/// Baseline readings are drawn uniformly from the bottom `baseline` fraction
/// of each sensor's range. An anomaly of magnitude m moves one sensor's
/// reading a fraction m of the way toward x_max at one cycle; m = 1 reads
/// exactly x_max. Cycles are stamped 1..cycles.

#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "chainsense/error.hpp"
#include "chainsense/model.hpp"

namespace chainsense {

struct Anomaly {
  int sensor_id = 0;
  std::int64_t cycle = 0;
  double magnitude = 1.0;  ///< In [0, 1].
};

/// Synthetic-run parameters. The seed fully determines the stream.
struct RunManifest {
  std::vector<int> layout;  ///< Sensors per cluster, for configless runs.
  std::int64_t cycles = 10;
  std::uint64_t seed = 1;
  double baseline = 0.02;
  std::vector<Anomaly> anomalies;
};

/// Parses "sensor:cycle:magnitude" (magnitude optional, default 1).
inline Anomaly parse_anomaly(std::string_view text) {
  Anomaly a;
  const auto bad = [&] {
    return ValidationError("bad anomaly '" + std::string(text) +
                           "' (expected sensor:cycle[:magnitude])");
  };
  const std::size_t c1 = text.find(':');
  if (c1 == std::string_view::npos) throw bad();
  const std::size_t c2 = text.find(':', c1 + 1);
  auto parse = [&](std::string_view s, auto& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty()) throw bad();
  };
  parse(text.substr(0, c1), a.sensor_id);
  parse(text.substr(c1 + 1, c2 == std::string_view::npos ? c2 : c2 - c1 - 1),
        a.cycle);
  if (c2 != std::string_view::npos) parse(text.substr(c2 + 1), a.magnitude);
  return a;
}

/// Sensors 1..N laid out in consecutive clusters c1, c2, ... with range
/// [0, 100].
inline Model synthetic_model(const std::vector<int>& layout,
                             const EngineConfig& cfg) {
  std::vector<SensorSpec> specs;
  int id = 0;
  for (std::size_t c = 0; c < layout.size(); ++c) {
    if (layout[c] < 1)
      throw ValidationError("empty cluster in synthetic layout");
    for (int k = 0; k < layout[c]; ++k) {
      ++id;
      specs.push_back({id, "s" + std::to_string(id), "u", 0.0, 100.0,
                       "c" + std::to_string(c + 1)});
    }
  }
  return validate_config(specs, cfg);
}

inline std::vector<ReadingFrame> generate_synthetic(const RunManifest& manifest,
                                                    const Model& model) {
  if (manifest.cycles < 0) throw ValidationError("negative cycle count");
  if (!(manifest.baseline >= 0.0 && manifest.baseline <= 1.0))
    throw ValidationError("baseline fraction outside [0, 1]");
  for (const Anomaly& a : manifest.anomalies) {
    if (!model.has_sensor(a.sensor_id))
      throw ValidationError("anomaly references unknown sensor " +
                            std::to_string(a.sensor_id));
    if (!(a.magnitude >= 0.0 && a.magnitude <= 1.0))
      throw ValidationError("anomaly magnitude outside [0, 1]");
  }

  std::mt19937_64 rng(manifest.seed);
  // Bit-level mapping; distribution objects are not portable across
  // standard libraries.
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  std::vector<ReadingFrame> frames;
  for (std::int64_t t = 1; t <= manifest.cycles; ++t) {
    ReadingFrame frame;
    frame.timestamp = t;
    for (const SensorSpec& spec : model.specs()) {
      const double width = spec.x_max - spec.x_min;
      double raw = spec.x_min + manifest.baseline * uniform() * width;
      for (const Anomaly& a : manifest.anomalies) {
        if (a.sensor_id == spec.id && a.cycle == t)
          raw = (1.0 - a.magnitude) * raw + a.magnitude * spec.x_max;
      }
      frame.values[spec.id] = std::clamp(raw, spec.x_min, spec.x_max);
    }
    frames.push_back(std::move(frame));
  }
  return frames;
}

}  // namespace chainsense
