// Copyright 2026 The shewpt Authors
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

namespace shewpt {

enum class ErrorCode {
  Validation = 1,
  DimensionMismatch = 2,
  Singular = 3,
  Divergence = 4,
  NonConvergence = 5,
  Cost = 6,
  Io = 7,
};

/// Base of every error raised by the library. `field()` names the offending
/// input when the failure is a validation problem, and is empty otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        code_(code),
        field_(std::move(field)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& field() const noexcept { return field_; }

 private:
  ErrorCode code_;
  std::string field_;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& message)
      : Error(ErrorCode::Validation, std::move(field), message) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& message)
      : Error(ErrorCode::DimensionMismatch, {}, message) {}
};

class SingularError : public Error {
 public:
  explicit SingularError(const std::string& message)
      : Error(ErrorCode::Singular, {}, message) {}
};

class DivergenceError : public Error {
 public:
  explicit DivergenceError(const std::string& message)
      : Error(ErrorCode::Divergence, {}, message) {}
};

class CostError : public Error {
 public:
  explicit CostError(const std::string& message)
      : Error(ErrorCode::Cost, {}, message) {}
};

class IoError : public Error {
 public:
  IoError(std::string path, const std::string& message)
      : Error(ErrorCode::Io, std::move(path), message) {}
};

}  // namespace shewpt
