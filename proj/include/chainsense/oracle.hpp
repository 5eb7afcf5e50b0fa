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
/// Brute-force reference evaluator used to cross-check run_cycle().
///
/// Shares only the validated Model and the report types with the main
/// engine. Permutations come from plain recursive selection, couplings from
/// a floating-point double loop over all pairs, and every chain is computed
/// through all n - 1 levels before survival is decided.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "chainsense/error.hpp"
#include "chainsense/model.hpp"
#include "chainsense/orchestrator.hpp"

namespace chainsense {

inline constexpr int kOracleMaxSensors = 8;

namespace oracle {

inline void all_permutations(int n, std::vector<int>& current,
                             std::vector<bool>& used,
                             std::vector<std::vector<int>>& out) {
  if (static_cast<int>(current.size()) == n) {
    out.push_back(current);
    return;
  }
  for (int id = 1; id <= n; ++id) {
    if (used[id]) continue;
    used[id] = true;
    current.push_back(id);
    all_permutations(n, current, used, out);
    current.pop_back();
    used[id] = false;
  }
}

// Mean of 1 - |i - j| / n over all pairs of the first `count` entries.
inline double mean_weight(const std::vector<int>& sequence, int count, int n) {
  double w = 0;
  int b = 0;
  for (int i = 0; i < count; ++i) {
    for (int j = i + 1; j < count; ++j) {
      w = w + (1.0 - std::abs(sequence[i] - sequence[j]) / double(n));
      b = b + 1;
    }
  }
  return w / b;
}

}  // namespace oracle

inline AlarmReport oracle_run_cycle(const ReadingFrame& frame,
                                    const Model& model) {
  const EngineConfig& cfg = model.config();
  AlarmReport report;
  report.timestamp = frame.timestamp;

  for (const ClusterLayout& layout : model.clusters()) {
    const int n = static_cast<int>(layout.size());
    if (n > kOracleMaxSensors)
      throw GuardError("cluster '" + layout.id + "' too large for the oracle");
  }

  for (const ClusterLayout& layout : model.clusters()) {
    const int n = static_cast<int>(layout.size());
    ClusterReport cluster;
    cluster.cluster_id = layout.id;
    cluster.sensor_ids = layout.sensor_ids;

    std::vector<double> x(n);
    for (int k = 0; k < n; ++k) {
      const SensorSpec& spec = model.sensor(layout.sensor_ids[k]);
      auto it = frame.values.find(spec.id);
      if (it == frame.values.end())
        throw RangeError("missing reading for sensor " + std::to_string(spec.id),
                         spec.id);
      const double raw = it->second;
      if (raw < spec.x_min || raw > spec.x_max || std::isnan(raw))
        throw RangeError("reading out of range for sensor " +
                             std::to_string(spec.id),
                         spec.id);
      const double f = 1.0 / std::fabs(spec.x_max - spec.x_min);
      x[k] = f * (raw - spec.x_min);
    }

    if (n >= 2) {
      std::vector<std::vector<int>> sequences;
      std::vector<int> current;
      std::vector<bool> used(n + 1, false);
      oracle::all_permutations(n, current, used, sequences);
      std::sort(sequences.begin(), sequences.end());

      for (const std::vector<int>& seq : sequences) {
        std::vector<double> levels;
        double acc = x[seq[0] - 1];
        int acc_level = 1;
        for (int k = 1; k < n; ++k) {
          const double a = oracle::mean_weight(seq, k + 1, n);
          const double e =
              a * ((acc / (acc_level + 1)) + (x[seq[k] - 1] / (1 + 1)));
          levels.push_back(e);
          acc = e;
          acc_level = k + 1;
        }
        int pruned_at = 0;
        for (std::size_t k = 0; k < levels.size(); ++k) {
          if (!(levels[k] > cfg.threshold)) {
            pruned_at = static_cast<int>(k) + 1;
            break;
          }
        }
        ++cluster.evaluated;
        if (pruned_at == 0) {
          ++cluster.survivors;
          if (cfg.trace_mode != TraceMode::kNone)
            cluster.survivor_list.push_back({seq, levels.back()});
        } else {
          ++cluster.pruned;
        }
        if (cfg.trace_mode == TraceMode::kFull) {
          if (pruned_at != 0) levels.resize(pruned_at);
          cluster.traces.push_back({seq, levels, pruned_at});
        }
      }
    }
    cluster.alarm = cluster.survivors > 0;
    report.alarm = report.alarm || cluster.alarm;
    report.clusters.push_back(std::move(cluster));
  }
  return report;
}

}  // namespace chainsense
