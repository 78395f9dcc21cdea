// Copyright 2026 The FCQW Authors
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fcqw {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A qubit, site or matrix index outside its valid range.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// An argument that is well-typed but violates an operation's precondition.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// An input object breaks a structural invariant (non-unitary matrix,
/// circuit that does not conserve particle number, unnormalized density).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Sampling grid too coarse for an unambiguous phase increment.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Input with no usable mass (e.g. an all-zero density).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// Serialized data with the wrong shape (bitstring length, CSV layout).
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// An eigenphase sits on the branch cut of the principal logarithm.
class BranchCutError : public Error {
 public:
  BranchCutError(const std::string& what, double phase)
      : Error(what), phase_(phase) {}
  double phase() const noexcept { return phase_; }

 private:
  double phase_;
};

/// QASM text outside the supported subset. Line numbers are 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Experiment configuration rejected; lists every offending field.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> fields)
      : Error(join(fields)), fields_(std::move(fields)) {}
  const std::vector<std::string>& fields() const noexcept { return fields_; }

 private:
  static std::string join(const std::vector<std::string>& fields) {
    std::string out = "invalid experiment config:";
    for (const auto& f : fields) out += "\n  " + f;
    return out;
  }
  std::vector<std::string> fields_;
};

}  // namespace fcqw
