// Copyright 2026 The qst Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qst {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands have incompatible shapes or dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A precondition on an argument value was violated (range, size, sign).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A state vector or factor does not have unit norm.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

/// Constraint that a candidate density matrix or POVM failed.
enum class Violation {
  non_finite,
  non_hermitian,
  negative_eigenvalue,
  trace,
  completeness,
};

const char* to_string(Violation v);

/// Validation failure carrying every violated constraint, not just the first.
class ValidationError : public Error {
 public:
  ValidationError(std::vector<Violation> violations, const std::string& detail);

  const std::vector<Violation>& violations() const { return violations_; }
  bool has(Violation v) const;

 private:
  std::vector<Violation> violations_;
};

/// An iterative solver's residual blew up; usually the step size is too large.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text (design-vector file, experiment spec).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// File could not be opened, read, or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace qst
