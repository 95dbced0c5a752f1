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

// Synthetic meshes, bases and numerical oracles shared by the test binaries.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>

#include <Eigen/Core>

#include "lshape/latent.hpp"
#include "lshape/mesh.hpp"

namespace lshape::testing {

/// uv sphere of unit diameter with seeded radial jitter of relative size
/// `jitter`, so faces are irregular but well shaped.
TriangleMesh jittered_sphere(int rings, int segments, double jitter, std::uint64_t seed);

/// uv ellipsoid with semi-axes `axes`.
TriangleMesh ellipsoid(const Vec3& axes, int rings, int segments);

/// Entries uniform in [-scale, scale].
VertexField random_field(Index n, std::uint64_t seed, double scale = 1.0);
Eigen::VectorXd random_vector(Index n, std::uint64_t seed, double scale = 1.0);

/// Three constant fields e_x, e_y, e_z (all in the shape block).
LatentBasis translation_basis(const TriangleMesh& tmpl);

/// P smooth, linearly independent fields: random affine maps plus one
/// low-frequency sinusoid each, scaled to a largest vertex displacement of
/// `amplitude`. The first `shape_count` fields form the shape block.
LatentBasis smooth_basis(const TriangleMesh& tmpl, int P, std::uint64_t seed,
                         double amplitude = 0.1, Index shape_count = -1);

/// Central differences of f at x with step eps * max(1, |x_i|).
Eigen::VectorXd central_difference(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x, double eps = 1e-5);

/// |g - fd|_inf / max(|fd|_inf, floor).
double relative_error(const Eigen::VectorXd& g, const Eigen::VectorXd& fd,
                      double floor = 1e-12);

/// Fresh empty directory under the system temp dir.
std::filesystem::path temp_dir(const std::string& tag);

}  // namespace lshape::testing
