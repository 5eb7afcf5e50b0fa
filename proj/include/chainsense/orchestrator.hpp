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
/// Per-cycle driver: normalize the frame, exhaustively evaluate every
/// cluster, and aggregate survivors into an alarm decision.
///
/// Clusters are independent sensor networks, each with its own coupling
/// table sized to the cluster. Any surviving sequence in any cluster raises
/// the alarm. Reports are canonical: clusters in configuration order,
/// sequences in lexicographic order, regardless of the worker count.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "chainsense/coupling.hpp"
#include "chainsense/enumerator.hpp"
#include "chainsense/error.hpp"
#include "chainsense/evaluator.hpp"
#include "chainsense/model.hpp"

namespace chainsense {

struct ClusterModel {
  std::string id;
  std::vector<SensorSpec> members;  ///< Canonical order.
  CouplingTable table;
};

inline std::vector<ClusterModel> build_clusters(const Model& model) {
  std::vector<ClusterModel> clusters;
  for (const ClusterLayout& layout : model.clusters()) {
    ClusterModel cluster{layout.id, {},
                         CouplingTable(static_cast<int>(layout.size()))};
    for (int id : layout.sensor_ids) cluster.members.push_back(model.sensor(id));
    clusters.push_back(std::move(cluster));
  }
  return clusters;
}

struct SurvivorRecord {
  std::vector<int> sequence;  ///< Canonical indices.
  double final_value = 0;
  bool operator==(const SurvivorRecord&) const = default;
};

struct ClusterReport {
  std::string cluster_id;
  std::vector<int> sensor_ids;  ///< Canonical index k + 1 -> sensor id.
  std::uint64_t evaluated = 0;
  std::uint64_t pruned = 0;
  std::uint64_t survivors = 0;
  bool alarm = false;
  std::vector<SurvivorRecord> survivor_list;  ///< trace_mode survivors|full.
  std::vector<EvaluationTrace> traces;        ///< trace_mode full.
  bool operator==(const ClusterReport&) const = default;
};

struct AlarmReport {
  std::int64_t timestamp = 0;
  std::vector<ClusterReport> clusters;
  bool alarm = false;
  bool operator==(const AlarmReport&) const = default;
};

struct RunOptions {
  int workers = 1;
  bool allow_large = false;  ///< Overrides max_sensors_guard.
  Pruning pruning = Pruning::kEnabled;
};

/// Throws GuardError if any cluster exceeds the configured size guard.
inline void check_guard(const Model& model, const RunOptions& options) {
  if (options.allow_large) return;
  const int guard = model.config().max_sensors_guard;
  for (const ClusterLayout& c : model.clusters()) {
    if (static_cast<int>(c.size()) > guard)
      throw GuardError("cluster '" + c.id + "' has " +
                       std::to_string(c.size()) +
                       " sensors, above the guard of " + std::to_string(guard) +
                       " (" + std::to_string(c.size()) +
                       "! sequences); override to run anyway");
  }
  for (const ClusterLayout& c : model.clusters()) {
    if (static_cast<int>(c.size()) > kMaxEnumerable)
      throw GuardError("cluster '" + c.id + "' is too large to enumerate");
  }
}

namespace detail {

struct StreamResult {
  std::uint64_t evaluated = 0;
  std::uint64_t pruned = 0;
  std::vector<SurvivorRecord> survivors;
  std::vector<EvaluationTrace> traces;
};

inline StreamResult drain(SequenceStream& stream, std::span<const double> values,
                          const CouplingTable& table, double threshold,
                          TraceMode mode, Pruning pruning) {
  StreamResult result;
  std::vector<double> levels(static_cast<std::size_t>(table.size()) - 1);
  while (stream.next()) {
    const auto sequence = stream.current();
    const ChainOutcome outcome = evaluate_chain_unchecked(
        sequence, values, table, threshold, levels, pruning);
    ++result.evaluated;
    if (outcome.survived()) {
      if (mode != TraceMode::kNone)
        result.survivors.push_back(
            {{sequence.begin(), sequence.end()}, levels[outcome.steps - 1]});
    } else {
      ++result.pruned;
    }
    if (mode == TraceMode::kFull) {
      EvaluationTrace trace;
      trace.sequence.assign(sequence.begin(), sequence.end());
      trace.levels.assign(levels.begin(), levels.begin() + outcome.steps);
      trace.pruned_at = outcome.pruned_at;
      result.traces.push_back(std::move(trace));
    }
  }
  return result;
}

}  // namespace detail

/// Exhaustively evaluates one cluster over its canonical normalized values.
inline ClusterReport evaluate_cluster(const ClusterModel& cluster,
                                      std::span<const double> values,
                                      const EngineConfig& cfg,
                                      const RunOptions& options = {}) {
  ClusterReport report;
  report.cluster_id = cluster.id;
  for (const SensorSpec& s : cluster.members) report.sensor_ids.push_back(s.id);
  const int n = cluster.table.size();
  if (n < 2) return report;  // no pair to evaluate

  std::vector<SequenceStream> streams;
  if (options.workers > 1 && n > 2)
    streams = partition_by_prefix(n, std::min(2, n - 1));
  else
    streams.push_back(enumerate_sequences(n));

  std::vector<detail::StreamResult> results(streams.size());
  auto work = [&](std::size_t k) {
    results[k] = detail::drain(streams[k], values, cluster.table, cfg.threshold,
                               cfg.trace_mode, options.pruning);
  };

  const std::size_t workers = std::min<std::size_t>(
      static_cast<std::size_t>(std::max(options.workers, 1)), streams.size());
  if (workers <= 1) {
    for (std::size_t k = 0; k < streams.size(); ++k) work(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t k = next++; k < streams.size(); k = next++) work(k);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (std::thread& t : pool) t.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  // Prefix streams are in lexicographic order, so concatenation is canonical.
  for (detail::StreamResult& r : results) {
    report.evaluated += r.evaluated;
    report.pruned += r.pruned;
    report.survivors += r.evaluated - r.pruned;
    std::move(r.survivors.begin(), r.survivors.end(),
              std::back_inserter(report.survivor_list));
    std::move(r.traces.begin(), r.traces.end(),
              std::back_inserter(report.traces));
  }
  report.alarm = report.survivors > 0;
  return report;
}

/// One full evaluation of an acquisition cycle.
inline AlarmReport run_cycle(const ReadingFrame& frame, const Model& model,
                             const RunOptions& options = {}) {
  check_guard(model, options);
  const NormalizedFrame normalized = normalize_frame(frame, model);

  AlarmReport report;
  report.timestamp = frame.timestamp;
  const std::vector<ClusterModel> clusters = build_clusters(model);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const std::vector<double> values =
        cluster_values(normalized, model.clusters()[c]);
    report.clusters.push_back(
        evaluate_cluster(clusters[c], values, model.config(), options));
    report.alarm = report.alarm || report.clusters.back().alarm;
  }
  return report;
}

/// Outcome of one cycle in a stream: a report, or the error that stopped it.
struct CycleResult {
  std::int64_t timestamp = 0;
  std::optional<AlarmReport> report;
  std::string error;

  bool ok() const noexcept { return report.has_value(); }
  bool operator==(const CycleResult&) const = default;
};

/// Runs every frame independently, preserving order. Without fail-fast a
/// failing cycle becomes an error record and the stream continues.
inline std::vector<CycleResult> run_stream(std::span<const ReadingFrame> frames,
                                           const Model& model,
                                           const RunOptions& options = {},
                                           bool fail_fast = false) {
  for (std::size_t k = 1; k < frames.size(); ++k) {
    if (frames[k].timestamp < frames[k - 1].timestamp)
      throw DomainError("frames out of timestamp order at timestamp " +
                        std::to_string(frames[k].timestamp));
  }
  check_guard(model, options);

  std::vector<CycleResult> results;
  results.reserve(frames.size());
  for (const ReadingFrame& frame : frames) {
    CycleResult result;
    result.timestamp = frame.timestamp;
    try {
      result.report = run_cycle(frame, model, options);
    } catch (const RangeError& e) {
      if (fail_fast) throw;
      result.error = e.what();
    }
    results.push_back(std::move(result));
  }
  return results;
}

}  // namespace chainsense
