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

#include "lshape/error.hpp"

namespace lshape {

DegenerateFaceError::DegenerateFaceError(std::size_t face,
                                         const std::string& what)
    : Error("degenerate face " + std::to_string(face) + ": " + what),
      face_(face) {}

NumericalFailure::NumericalFailure(const std::string& what,
                                   std::optional<int> step)
    : Error(step ? what + " (step " + std::to_string(*step) + ")" : what),
      step_(step) {}

}  // namespace lshape
