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
/// Left-deep chain evaluation of one sensor sequence.
///
/// Step 1 combines the first two sensors of the sequence. Every later step k
/// combines the accumulated value (level k, holding the first k sensors) with
/// the next raw sensor (level 1), weighted by the mean coupling of all k + 1
/// sensors involved. A step whose value does not strictly exceed the
/// threshold ends the chain.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "chainsense/coupling.hpp"
#include "chainsense/error.hpp"

namespace chainsense {

/// A value entering an interaction together with its evaluation level.
/// Raw sensors carry level 1; an accumulated value carries the number of
/// sensors folded into it.
struct LeveledValue {
  double value = 0;
  int level = 1;
};

/// E = a * (x1 / (l1 + 1) + x2 / (l2 + 1)).
struct DampedLinearRule {
  double operator()(LeveledValue x1, LeveledValue x2, double a) const noexcept {
    return a * (x1.value / (x1.level + 1) + x2.value / (x2.level + 1));
  }
};

inline double evaluate_pair(LeveledValue x1, LeveledValue x2, double a) {
  return DampedLinearRule{}(x1, x2, a);
}

enum class Pruning { kEnabled, kDisabled };

struct ChainOutcome {
  int steps = 0;       ///< Level values written.
  int pruned_at = 0;   ///< First level with E <= threshold; 0 if none.
  bool survived() const noexcept { return pruned_at == 0; }
};

/// Hot-path evaluation without argument checks.
///
/// `sequence` must be a permutation of 1..n with n >= 2, `values[k]` the
/// normalized reading of canonical index k + 1, and `levels` at least n - 1
/// long. With pruning disabled every level is computed and survival is
/// decided afterwards.
template <typename PairRule = DampedLinearRule>
ChainOutcome evaluate_chain_unchecked(std::span<const int> sequence,
                                      std::span<const double> values,
                                      const CouplingTable& table,
                                      double threshold, std::span<double> levels,
                                      Pruning pruning = Pruning::kEnabled,
                                      PairRule rule = {}) {
  ChainOutcome outcome;
  PrefixCoupling coupling(table);
  coupling.push(sequence.first(0), sequence[0]);

  LeveledValue acc{values[sequence[0] - 1], 1};
  const std::size_t n = sequence.size();
  for (std::size_t k = 1; k < n; ++k) {
    const int next = sequence[k];
    coupling.push(sequence.first(k), next);
    const double e = rule(acc, LeveledValue{values[next - 1], 1},
                          coupling.value());
    levels[k - 1] = e;
    outcome.steps = static_cast<int>(k);
    if (!(e > threshold) && outcome.pruned_at == 0) {
      outcome.pruned_at = static_cast<int>(k);
      if (pruning == Pruning::kEnabled) break;
    }
    acc = LeveledValue{e, static_cast<int>(k) + 1};
  }
  return outcome;
}

/// Per-sequence record of level values and survival.
struct EvaluationTrace {
  std::vector<int> sequence;
  std::vector<double> levels;
  int pruned_at = 0;  ///< 0 when the sequence survived.

  bool survived() const noexcept { return pruned_at == 0; }
  double final_value() const { return levels.empty() ? 0.0 : levels.back(); }
  bool operator==(const EvaluationTrace&) const = default;
};

namespace detail {

inline void check_permutation(std::span<const int> sequence, int n) {
  if (static_cast<int>(sequence.size()) != n)
    throw DomainError("sequence length " + std::to_string(sequence.size()) +
                      " does not match cluster size " + std::to_string(n));
  std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
  for (int id : sequence) {
    if (id < 1 || id > n || seen[id])
      throw DomainError("sequence is not a permutation of 1.." +
                        std::to_string(n));
    seen[id] = true;
  }
}

}  // namespace detail

/// Evaluates `sequence` (canonical indices) over the cluster's normalized
/// values. Pruned traces hold exactly the levels computed up to the prune.
template <typename PairRule = DampedLinearRule>
EvaluationTrace evaluate_chain(std::span<const int> sequence,
                               std::span<const double> values,
                               const CouplingTable& table, double threshold,
                               Pruning pruning = Pruning::kEnabled,
                               PairRule rule = {}) {
  const int n = table.size();
  if (n < 2) throw DomainError("a chain needs at least two sensors");
  detail::check_permutation(sequence, n);
  if (static_cast<int>(values.size()) != n)
    throw DomainError("value count does not match cluster size");

  EvaluationTrace trace;
  trace.sequence.assign(sequence.begin(), sequence.end());
  trace.levels.resize(static_cast<std::size_t>(n) - 1);
  const ChainOutcome outcome = evaluate_chain_unchecked(
      sequence, values, table, threshold, trace.levels, pruning, rule);
  trace.levels.resize(static_cast<std::size_t>(outcome.steps));
  trace.pruned_at = outcome.pruned_at;
  return trace;
}

inline bool survives(const EvaluationTrace& trace) { return trace.survived(); }

}  // namespace chainsense
