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
/// Exhaustive, lazy generation of sensor orderings.
///
/// A stream emits every permutation of 1..n exactly once in lexicographic
/// order, holding only the current permutation (O(n) memory). Every sensor
/// leads (n - 1)! sequences, so each one serves once as the root of a chain.
/// Streams restricted to a fixed prefix split the space into disjoint parts
/// that can be consumed in parallel.

#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "chainsense/error.hpp"

namespace chainsense {

/// Largest n whose n! fits in 64 bits.
inline constexpr int kMaxEnumerable = 20;

inline std::uint64_t factorial(int n) {
  if (n < 0 || n > kMaxEnumerable)
    throw DomainError("factorial argument out of range: " + std::to_string(n));
  std::uint64_t f = 1;
  for (int k = 2; k <= n; ++k) f *= static_cast<std::uint64_t>(k);
  return f;
}

/// Single-consumer cursor over the permutations of 1..n that start with a
/// fixed prefix (empty for the full space).
///
///   SequenceStream s = enumerate_sequences(4);
///   while (s.next()) use(s.current());
class SequenceStream {
 public:
  explicit SequenceStream(int n) : SequenceStream(n, {}) {}

  SequenceStream(int n, std::vector<int> prefix) : n_(n) {
    if (n < 1 || n > kMaxEnumerable)
      throw DomainError("sensor count " + std::to_string(n) +
                        " outside 1.." + std::to_string(kMaxEnumerable));
    if (static_cast<int>(prefix.size()) >= n && n > 1)
      throw DomainError("prefix must leave at least one free position");
    std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
    for (int id : prefix) {
      if (id < 1 || id > n || used[id])
        throw DomainError("prefix is not a partial permutation of 1.." +
                          std::to_string(n));
      used[id] = true;
    }
    fixed_ = prefix.size();
    current_ = std::move(prefix);
    for (int id = 1; id <= n; ++id)
      if (!used[id]) current_.push_back(id);
  }

  /// Advances to the next sequence; false once the stream is exhausted.
  bool next() {
    if (done_) return false;
    if (emitted_ > 0 &&
        !std::next_permutation(current_.begin() + fixed_, current_.end())) {
      done_ = true;
      return false;
    }
    ++emitted_;
    return true;
  }

  /// The sequence produced by the last successful next().
  std::span<const int> current() const noexcept { return current_; }
  std::span<const int> prefix() const noexcept {
    return std::span<const int>(current_).first(fixed_);
  }
  int size() const noexcept { return n_; }
  std::uint64_t emitted() const noexcept { return emitted_; }
  /// Number of sequences this stream yields in total.
  std::uint64_t total() const { return factorial(n_ - static_cast<int>(fixed_)); }

 private:
  int n_;
  std::size_t fixed_ = 0;
  std::vector<int> current_;
  std::uint64_t emitted_ = 0;
  bool done_ = false;
};

inline SequenceStream enumerate_sequences(int n) { return SequenceStream(n); }

/// One stream per ordered prefix of length `prefix_len`, in lexicographic
/// order of the prefixes: n! / (n - prefix_len)! disjoint streams whose
/// concatenation equals enumerate_sequences(n).
inline std::vector<SequenceStream> partition_by_prefix(int n, int prefix_len) {
  if (n < 2 || n > kMaxEnumerable)
    throw DomainError("cannot partition sequences of " + std::to_string(n) +
                      " sensors");
  if (prefix_len < 1 || prefix_len >= n)
    throw DomainError("prefix length " + std::to_string(prefix_len) +
                      " outside 1.." + std::to_string(n - 1));

  std::vector<SequenceStream> streams;
  std::vector<int> prefix;
  std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
  auto extend = [&](auto& self) -> void {
    if (static_cast<int>(prefix.size()) == prefix_len) {
      streams.emplace_back(n, prefix);
      return;
    }
    for (int id = 1; id <= n; ++id) {
      if (used[id]) continue;
      used[id] = true;
      prefix.push_back(id);
      self(self);
      prefix.pop_back();
      used[id] = false;
    }
  };
  extend(extend);
  return streams;
}

}  // namespace chainsense
