// Copyright 2026 The dfra Authors
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

#ifndef DFRA_ERRORS_HPP_
#define DFRA_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace dfra {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Array sizes do not agree (e.g. a gain table that is not N x K).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A parameter value is outside its admissible domain
/// (negative power, nonpositive noise variance, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The source multiplier fell below the admissible floor: the per-subcarrier
/// Lagrangian maximization is unbounded as mu_s -> 0 and the closed forms
/// would produce unbounded powers.
class UnboundedDualError : public Error {
 public:
  using Error::Error;
};

/// A solver could not produce a usable result (e.g. no feasible iterate was
/// ever encountered within the iteration cap).
class SolverFailure : public Error {
 public:
  using Error::Error;
};

/// A brute-force oracle was invoked on an instance beyond its size limits.
class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

}  // namespace dfra

#endif  // DFRA_ERRORS_HPP_
