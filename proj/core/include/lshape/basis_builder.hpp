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

#include <string>
#include <vector>

#include <Eigen/Core>

#include "lshape/latent.hpp"
#include "lshape/metric.hpp"
#include "lshape/optimize.hpp"

namespace lshape {

enum class TangentLabel { shape, pose };

struct TangentSample {
  VertexField vector;
  TangentLabel label = TangentLabel::shape;
  std::string source;
};

struct PCAResult {
  Eigen::VectorXd mean;                 // 3N
  std::vector<Eigen::VectorXd> components;  // unit norm, 3N each
  Eigen::VectorXd singular_values;      // nonincreasing
};

/// Initial velocities T (q(1/T) - q(0)) of the parametrized geodesics from
/// meshes[template_index] to every other mesh. Pairs whose solve throws are
/// skipped with a warning. `sources` (optional) names the meshes.
std::vector<TangentSample> shape_tangents(
    const std::vector<TriangleMesh>& meshes, std::size_t template_index,
    const MetricCoefficients& c, int steps, const OptimizerConfig& cfg = {},
    const std::vector<std::string>& sources = {});

/// Frame differences q_{t+1} - q_t of every sequence.
std::vector<TangentSample> pose_tangents(
    const std::vector<std::vector<TriangleMesh>>& sequences,
    const std::vector<std::string>& sources = {});

/// Top-k principal directions of the samples. With `center`, the sample mean
/// is removed first. Each component's largest-magnitude entry is positive.
PCAResult pca(const std::vector<TangentSample>& samples, int k, bool center);

/// First m shape components then the first n pose components.
LatentBasis assemble_basis(const TriangleMesh& template_mesh,
                           const PCAResult& shape_pca, const PCAResult& pose_pca,
                           int m, int n);

}  // namespace lshape
