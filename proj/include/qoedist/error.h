// Copyright 2026 The qoedist Authors. All Rights Reserved.
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

#ifndef QOEDIST_ERROR_H_
#define QOEDIST_ERROR_H_

#include <stdexcept>
#include <string>
#include <utility>

namespace qoedist {

// Broad failure classes. The CLI maps them onto exit codes.
enum class ErrorKind {
  kDomain,     // argument outside the mathematical domain of an operation
  kSchema,     // malformed or incomplete scenario configuration
  kData,       // unreadable or invalid input data file
  kNumerical,  // quadrature or series failed to converge
};

const char* ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::string pointer = {})
      : std::runtime_error(message), kind_(kind), pointer_(std::move(pointer)) {}

  ErrorKind kind() const { return kind_; }

  // Location of the offending item, e.g. a JSON pointer into the config or
  // "file:line" for data files. Empty when not applicable.
  const std::string& pointer() const { return pointer_; }

 private:
  ErrorKind kind_;
  std::string pointer_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message)
      : Error(ErrorKind::kDomain, message) {}
};

class NumericalError : public Error {
 public:
  NumericalError(const std::string& message, double best_estimate,
                 double error_bound)
      : Error(ErrorKind::kNumerical, message),
        best_estimate_(best_estimate),
        error_bound_(error_bound) {}

  double best_estimate() const { return best_estimate_; }
  double error_bound() const { return error_bound_; }

 private:
  double best_estimate_;
  double error_bound_;
};

}  // namespace qoedist

#endif  // QOEDIST_ERROR_H_
