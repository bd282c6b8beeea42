// Copyright 2026 The PGLP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PGLP_STATUS_HPP_
#define PGLP_STATUS_HPP_

#include <stdexcept>
#include <string>
#include <utility>

namespace pglp {

// Base of every error raised by the library. `code()` is a stable
// machine-readable identifier that the CLI forwards verbatim.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// Argument outside the domain of an operation (bad index, empty set, ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message)
      : Error("domain", message) {}
};

// The policy component of a node has no edges, so no sensitivity exists.
class NoSensitivityError : public Error {
 public:
  explicit NoSensitivityError(const std::string& message)
      : Error("no-sensitivity", message) {}
};

// Observed data contradicts the adversary model (e.g. the true location has
// zero prior probability, or an observation has zero likelihood).
class InconsistencyError : public Error {
 public:
  explicit InconsistencyError(const std::string& message)
      : Error("model-inconsistency", message) {}
};

// An isolated node cannot be repaired (no other node in the domain).
class UnrepairableError : public Error {
 public:
  explicit UnrepairableError(const std::string& message)
      : Error("unrepairable", message) {}
};

// Malformed configuration or input file.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message)
      : Error("config", message) {}
};

}  // namespace pglp

#endif  // PGLP_STATUS_HPP_
