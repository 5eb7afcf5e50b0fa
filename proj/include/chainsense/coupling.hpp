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
/// Coupling constants between sensors of one cluster.
///
/// The coupling of canonical indices i and j in a cluster of n sensors is
/// a_ij = 1 - |i - j| / n, so every value is an exact rational k / n with
/// 1 <= k <= n. Tables keep the integer numerators k; real values are formed
/// by one division, which keeps set couplings exact up to the final rounding.

#pragma once

#include <cstdint>
#include <cstdlib>
#include <span>
#include <string>
#include <vector>

#include "chainsense/detail/format.hpp"
#include "chainsense/error.hpp"

namespace chainsense {

namespace detail {

inline void check_index(int i, int n) {
  if (i < 1 || i > n)
    throw DomainError("sensor index " + std::to_string(i) +
                      " outside 1.." + std::to_string(n));
}

}  // namespace detail

/// Numerator k of a_ij = k / n.
inline int coupling_numerator(int i, int j, int n) {
  if (n < 1) throw DomainError("sensor count must be at least 1");
  detail::check_index(i, n);
  detail::check_index(j, n);
  return n - std::abs(i - j);
}

/// a_ij = 1 - |i - j| / n on canonical indices.
inline double coupling_pair(int i, int j, int n) {
  return static_cast<double>(coupling_numerator(i, j, n)) / n;
}

/// Symmetric n x n coupling matrix with unit diagonal, indexed 1..n.
class CouplingTable {
 public:
  explicit CouplingTable(int n) : n_(n) {
    if (n < 1) throw DomainError("sensor count must be at least 1");
    numerators_.resize(static_cast<std::size_t>(n) * n);
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        numerators_[slot(i, j)] = n - std::abs(i - j);
  }

  int size() const noexcept { return n_; }

  int numerator(int i, int j) const {
    detail::check_index(i, n_);
    detail::check_index(j, n_);
    return numerators_[slot(i, j)];
  }

  double operator()(int i, int j) const {
    return static_cast<double>(numerator(i, j)) / n_;
  }

  /// Header row of indices, then n rows of n entries.
  std::string to_csv() const {
    std::string out;
    for (int j = 1; j <= n_; ++j) {
      if (j > 1) out += ',';
      out += std::to_string(j);
    }
    out += '\n';
    for (int i = 1; i <= n_; ++i) {
      for (int j = 1; j <= n_; ++j) {
        if (j > 1) out += ',';
        out += detail::format_real((*this)(i, j));
      }
      out += '\n';
    }
    return out;
  }

 private:
  friend class PrefixCoupling;

  std::size_t slot(int i, int j) const noexcept {
    return static_cast<std::size_t>(i - 1) * n_ + (j - 1);
  }

  int n_;
  std::vector<int> numerators_;
};

inline CouplingTable build_table(int n) { return CouplingTable(n); }

/// Mean coupling over all unordered pairs drawn from `ids`.
///
/// Generalizes the three-pair average of a triple to any set of two or more
/// distinct canonical indices. Order of `ids` does not matter.
inline double coupling_set(std::span<const int> ids, int n) {
  if (ids.size() < 2)
    throw DomainError("set coupling needs at least two sensors");
  std::int64_t sum = 0;
  std::int64_t pairs = 0;
  for (std::size_t a = 0; a < ids.size(); ++a) {
    for (std::size_t b = a + 1; b < ids.size(); ++b) {
      if (ids[a] == ids[b])
        throw DomainError("duplicate sensor index " + std::to_string(ids[a]) +
                          " in coupling set");
      sum += coupling_numerator(ids[a], ids[b], n);
      ++pairs;
    }
  }
  return static_cast<double>(sum) /
         (static_cast<double>(pairs) * static_cast<double>(n));
}

/// Running set coupling over a growing prefix of a sequence.
///
/// push(id) adds one sensor; value() is coupling_set() of everything pushed
/// so far and is bit-identical to it, since both reduce to the same integer
/// numerator sum. No bounds checks: callers pass a verified permutation.
class PrefixCoupling {
 public:
  explicit PrefixCoupling(const CouplingTable& table) : table_(&table) {}

  void reset() noexcept {
    count_ = 0;
    sum_ = 0;
  }

  void push(std::span<const int> prefix, int id) noexcept {
    for (int prev : prefix) sum_ += table_->numerators_[table_->slot(prev, id)];
    ++count_;
  }

  double value() const noexcept {
    const std::int64_t pairs = count_ * (count_ - 1) / 2;
    return static_cast<double>(sum_) /
           (static_cast<double>(pairs) * static_cast<double>(table_->n_));
  }

 private:
  const CouplingTable* table_;
  std::int64_t count_ = 0;
  std::int64_t sum_ = 0;
};

}  // namespace chainsense
