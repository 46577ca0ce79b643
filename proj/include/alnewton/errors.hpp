// Copyright 2026 The alnewton Authors.
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

#include <stdexcept>
#include <string>

namespace alnewton {

// Raised when a caller breaks an operation's precondition (dimension
// mismatch, non-finite input, out-of-range parameter).
class ContractViolation : public std::invalid_argument {
 public:
  explicit ContractViolation(const std::string& what)
      : std::invalid_argument(what) {}
};

// Raised when floating-point computation breaks down (factorization failure,
// non-finite merit value, ascent direction).
class NumericalFailure : public std::runtime_error {
 public:
  explicit NumericalFailure(const std::string& what)
      : std::runtime_error(what) {}
};

// Malformed on-disk input. The message carries file and line context.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem failures while reading or writing bundles and reports.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

#define ALNEWTON_REQUIRE(cond, msg)                 \
  do {                                              \
    if (!(cond)) throw ::alnewton::ContractViolation(msg); \
  } while (0)

}  // namespace alnewton
