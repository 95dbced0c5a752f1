// Copyright 2026 The latentshape Authors.
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

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace lshape {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file or text.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Caller violated a documented precondition (sizes, ranges, flags).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Two meshes or fields that must share a connectivity do not.
class TopologyMismatch : public Error {
 public:
  using Error::Error;
};

/// A face with zero area or an ill-conditioned first fundamental form.
class DegenerateFaceError : public Error {
 public:
  DegenerateFaceError(std::size_t face, const std::string& what);

  std::size_t face() const noexcept { return face_; }

 private:
  std::size_t face_;
};

/// An iterative solver could not satisfy its contract.
class NumericalFailure : public Error {
 public:
  explicit NumericalFailure(const std::string& what,
                            std::optional<int> step = std::nullopt);

  /// Step index for time-stepping solvers, when known.
  std::optional<int> step() const noexcept { return step_; }

 private:
  std::optional<int> step_;
};

}  // namespace lshape
