// Copyright 2026 The ac3mpc Authors
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

namespace ac3mpc {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numeric result (state, gradient, loss) left the finite range.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

/// Requested terrain preset name does not exist.
class UnknownTerrainError : public Error {
 public:
  using Error::Error;
};

/// Vector/buffer dimensions do not match the declared layout.
class ShapeMismatchError : public Error {
 public:
  using Error::Error;
};

/// Filesystem read/write failure.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Checkpoint version or architecture does not match the loading target.
class FormatVersionMismatchError : public Error {
 public:
  using Error::Error;
};

/// The OCP solve could not produce a usable iterate.
class SolverFailureError : public Error {
 public:
  using Error::Error;
};

/// Metrics requested over an empty rollout record.
class EmptyRecordError : public Error {
 public:
  using Error::Error;
};

/// Configuration file problem, carrying "file:line" context.
class ConfigError : public Error {
 public:
  using Error::Error;
  ConfigError(const std::string& file, int line, const std::string& msg)
      : Error(file + ":" + std::to_string(line) + ": " + msg) {}
};

}  // namespace ac3mpc
