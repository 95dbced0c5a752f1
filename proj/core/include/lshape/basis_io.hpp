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

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "lshape/latent.hpp"

namespace lshape {

/// Current version of the binary basis container (see docs/FORMATS.md).
inline constexpr std::uint32_t kBasisFormatVersion = 1;

void write_basis(const LatentBasis& basis, std::ostream& out);
LatentBasis read_basis(std::istream& in);

void save_basis(const LatentBasis& basis, const std::filesystem::path& path);

/// Throws ParseError naming the path on a missing or malformed file.
LatentBasis load_basis(const std::filesystem::path& path);

}  // namespace lshape
