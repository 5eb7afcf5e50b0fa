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
/// Exception hierarchy shared by every chainsense module.

#pragma once

#include <stdexcept>
#include <string>

namespace chainsense {

/// Base of all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Configuration rejected by validation.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A raw reading outside its sensor's configured range, or missing.
class RangeError : public Error {
 public:
  RangeError(const std::string& msg, int sensor_id)
      : Error(msg), sensor_id_(sensor_id) {}

  int sensor_id() const noexcept { return sensor_id_; }

 private:
  int sensor_id_;
};

/// Cluster too large for exhaustive evaluation under the configured guard.
class GuardError : public Error {
 public:
  using Error::Error;
};

/// Malformed input to an operation (bad index, non-permutation, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration or readings file.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace chainsense
