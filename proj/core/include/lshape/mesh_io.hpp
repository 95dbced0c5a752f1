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

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "lshape/mesh.hpp"

namespace lshape {

enum class MeshFormat { obj, ply };

enum class PlyEncoding { ascii, binary_little_endian };

/// Picks the format from the file extension (.obj / .ply, case-insensitive).
MeshFormat format_from_extension(const std::filesystem::path& path);

/// Reads ASCII OBJ (`v` and `f` records; normals and texture coordinates
/// ignored) or ASCII / binary little-endian PLY. Polygons with more than three
/// corners are rejected.
TriangleMesh load_mesh(const std::filesystem::path& path,
                       std::optional<MeshFormat> format = std::nullopt);

void save_mesh(const TriangleMesh& mesh, const std::filesystem::path& path,
               std::optional<MeshFormat> format = std::nullopt,
               PlyEncoding encoding = PlyEncoding::binary_little_endian);

TriangleMesh read_obj(std::istream& in);
TriangleMesh read_ply(std::istream& in);

/// Coordinates are written with max_digits10 so a write/read cycle is exact.
void write_obj(const TriangleMesh& mesh, std::ostream& out);

/// Vertex coordinates as float32 (`property float x` ...), faces as a uchar
/// count followed by int32 indices.
void write_ply(const TriangleMesh& mesh, std::ostream& out,
               PlyEncoding encoding = PlyEncoding::binary_little_endian);

}  // namespace lshape
