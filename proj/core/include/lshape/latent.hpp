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

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "lshape/mesh.hpp"
#include "lshape/metric.hpp"

namespace lshape {

using LatentCode = Eigen::VectorXd;
/// Knots alpha(0), alpha(1/T), ..., alpha(1).
using LatentPath = std::vector<LatentCode>;

/// Template mesh plus P deformation fields, split into a shape block [0, m)
/// and a pose block [m, P).
///
/// Fields are stored as the columns of a 3N x P matrix in flattened vertex
/// order. Construction rejects linearly dependent fields (smallest singular
/// value below 1e-8 times the largest).
class LatentBasis {
 public:
  LatentBasis(TriangleMesh template_mesh, Eigen::MatrixXd fields,
              Index shape_count);
  LatentBasis(TriangleMesh template_mesh, const std::vector<VertexField>& fields,
              Index shape_count);

  const TriangleMesh& template_mesh() const noexcept { return template_; }
  const Eigen::MatrixXd& fields() const noexcept { return fields_; }
  VertexField field(Index i) const;

  Index dimension() const noexcept { return fields_.cols(); }
  Index shape_count() const noexcept { return shape_count_; }
  Index pose_count() const noexcept { return fields_.cols() - shape_count_; }

  /// q_bar + sum_i alpha_i h_i without mesh validation.
  VertexMatrix decode_vertices(const LatentCode& alpha) const;

  /// Decoded mesh; throws DegenerateFaceError if a face collapses.
  TriangleMesh decode(const LatentCode& alpha) const;

  /// Flattened H beta for a coefficient vector beta.
  VertexField expand(const Eigen::VectorXd& beta) const;

  /// H^T g for a vertex-space covector g.
  Eigen::VectorXd project(const VertexField& g) const;

 private:
  void check_code(const Eigen::VectorXd& alpha) const;

  TriangleMesh template_;
  Eigen::MatrixXd fields_;
  Index shape_count_;
};

/// Free-function form of LatentBasis::decode.
TriangleMesh decode(const LatentBasis& basis, const LatentCode& alpha);

/// Pullback metric: entry (i, j) is G_{decode(alpha)}(h_i, h_j).
Eigen::MatrixXd gram(const LatentBasis& basis, const LatentCode& alpha,
                     const MetricCoefficients& c);

/// T * sum_t (alpha_{t+1} - alpha_t)^T G_{alpha_t} (alpha_{t+1} - alpha_t).
double latent_path_energy(const LatentBasis& basis, const LatentPath& path,
                          const MetricCoefficients& c);

struct LatentPathEnergyGradient {
  double value = 0.0;
  std::vector<Eigen::VectorXd> gradient;  // one per knot
};

LatentPathEnergyGradient latent_path_energy_gradient(
    const LatentBasis& basis, const LatentPath& path,
    const MetricCoefficients& c);

/// Central difference (G_{alpha + eps beta} - G_{alpha - eps beta}) / (2 eps).
/// The default step is 1e-5 (1 + |alpha|).
Eigen::MatrixXd gram_directional_derivative(const LatentBasis& basis,
                                            const LatentCode& alpha,
                                            const Eigen::VectorXd& beta,
                                            const MetricCoefficients& c,
                                            std::optional<double> eps = {});

/// Replaces the shape block [0, shape_count) of every code with the one of
/// `target_shape`; pose blocks are copied unchanged.
LatentPath substitute_shape_block(const LatentPath& path,
                                  const LatentCode& target_shape,
                                  Index shape_count);

}  // namespace lshape
