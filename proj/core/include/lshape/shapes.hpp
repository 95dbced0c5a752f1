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
#include <vector>

#include "lshape/mesh.hpp"

namespace lshape::shapes {

/// Icosahedron refined `levels` times by midpoint subdivision with vertices
/// projected back onto the sphere of the given radius.
TriangleMesh icosphere(int levels, double radius = 1.0);

/// Latitude/longitude sphere: `rings` latitude bands, `segments` meridians.
TriangleMesh uv_sphere(int rings, int segments, double radius = 1.0);

/// Regular (nx+1) x (ny+1) grid on [0, sx] x [0, sy] in the z = 0 plane.
TriangleMesh grid(int nx, int ny, double sx = 1.0, double sy = 1.0);

/// One step of 1-to-4 midpoint subdivision. With `project_radius` > 0, new
/// vertices are pushed onto the origin-centred sphere of that radius.
TriangleMesh subdivide(const TriangleMesh& mesh, double project_radius = 0.0);

/// Scales coordinates axis-wise: (x, y, z) -> (ax x, ay y, az z).
TriangleMesh scale_axes(const TriangleMesh& mesh, const Vec3& axes);

/// Bends the mesh around the z axis: a point at height y is rotated in the
/// x-y plane by angle `curvature * y`, about the centre of curvature at
/// x = 1/curvature. Curvature 0 is the identity.
TriangleMesh bend(const TriangleMesh& mesh, double curvature);

/// Uniform scale so that the vertex-set diameter becomes 1 (about the origin).
TriangleMesh normalize_to_unit_diameter(const TriangleMesh& mesh,
                                        double* scale_out = nullptr);

/// Relabels vertices by a seeded random permutation and shuffles face order.
/// The embedded surface is unchanged.
TriangleMesh permute_vertices(const TriangleMesh& mesh, std::uint64_t seed);

/// Flips up to `count` interior edges chosen by a seeded shuffle, skipping any
/// flip that would create a degenerate face, an existing edge, or a face whose
/// normal is more than 60 degrees off the mean normal of the two old faces.
/// Each face takes part in at most one flip. Returns the remeshed surface.
TriangleMesh flip_edges(const TriangleMesh& mesh, int count,
                        std::uint64_t seed);

/// Reverses the orientation of every face.
TriangleMesh flip_orientation(const TriangleMesh& mesh);

/// Rigid motion x -> R x + t applied to all vertices.
TriangleMesh transform(const TriangleMesh& mesh, const Eigen::Matrix3d& R,
                       const Vec3& t);

/// Haar-ish random rotation from a seeded quaternion draw.
Eigen::Matrix3d random_rotation(std::uint64_t seed);

}  // namespace lshape::shapes
