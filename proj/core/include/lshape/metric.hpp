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

#include <array>
#include <vector>

#include <Eigen/Core>

#include "lshape/mesh.hpp"

namespace lshape {

/// Weights of the six-term second-order invariant Sobolev metric:
///
///   a0  L2 term                 <h, k> vol
///   a1  shear   (traceless)     tr(g^-1 dg(h) g^-1 dg(k)) vol
///   b1  stretch (area change)   tr(g^-1 dg(h)) tr(g^-1 dg(k)) vol
///   c1  bending (normal change) <dn(h), dn(k)> vol
///   d1  rotation                tr(g^-1 xi(h) g^-1 xi(k)^T) vol
///   a2  second order            <L h, L k> vol
struct MetricCoefficients {
  double a0 = 1.0;
  double a1 = 0.0;
  double b1 = 0.0;
  double c1 = 0.0;
  double d1 = 0.0;
  double a2 = 0.0;

  /// Defaults tuned for near-isometric body motion.
  static MetricCoefficients bodies() { return {1, 1000, 100, 1, 1, 1}; }
  /// Defaults for face scans: weaker stretch/shear, stronger bending.
  static MetricCoefficients faces() { return {1, 10, 10, 10, 1, 1}; }

  /// a0 > 0 and either every first-order weight or a2 is positive; the
  /// induced distance is then non-degenerate.
  bool nondegenerate() const;

  /// Throws InvalidArgument if any weight is negative or non-finite.
  void validate() const;

  std::array<double, 6> as_array() const { return {a0, a1, b1, c1, d1, a2}; }
};

/// Analytic first variations of the face geometry along a vertex field.
struct MetricTerms {
  std::vector<Eigen::Matrix2d> delta_g;             // per face, symmetric
  VertexMatrix delta_n;                             // per face
  std::vector<Eigen::Matrix<double, 3, 2>> dh;      // per face
  VertexField laplacian;                            // per vertex
};

MetricTerms metric_terms(const TriangleMesh& mesh, const VertexField& h);

/// Weighted contribution of each term to G_q(h, k).
struct H2TermValues {
  std::array<double, 6> terms{};  // order a0, a1, b1, c1, d1, a2
  double total() const;
};

H2TermValues h2_terms(const TriangleMesh& mesh, const VertexField& h,
                      const VertexField& k, const MetricCoefficients& c);

/// G_q(h, k). Logs a warning (once per process) when the coefficients fail
/// the non-degeneracy condition.
double h2_inner(const TriangleMesh& mesh, const VertexField& h,
                const VertexField& k, const MetricCoefficients& c);

/// Linear map h -> phi(h) with G_q(h, k) = phi(h) . phi(k).
///
/// Every term of the metric is a weighted sum of squares of quantities that
/// are linear in h, so the metric factors through a feature vector of length
/// 6N + 8M. Gram matrices are then a single matrix product, symmetric and
/// positive semi-definite by construction.
///
/// Construction throws DegenerateFaceError when a face's first fundamental
/// form has condition number above 1e12.
class MetricEmbedding {
 public:
  MetricEmbedding(const TriangleMesh& mesh, const MetricCoefficients& c);

  Index dimension() const noexcept { return 6 * n_ + 8 * m_; }

  Eigen::VectorXd embed(const VertexField& h) const;

  /// Columns of `fields` are flattened 3N vertex fields; returns the P x P
  /// Gram matrix, exactly symmetric.
  Eigen::MatrixXd gram(const Eigen::MatrixXd& fields) const;

 private:
  void embed_flat(const double* h, double* out) const;

  Index n_ = 0;
  Index m_ = 0;
  FaceMatrix faces_;
  Eigen::VectorXd sqrt_a0_vol_;
  Eigen::VectorXd sqrt_a2_vol_;
  Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor> cot_;
  // per face: e1, e2, unit normal, |e1 x e2|
  VertexMatrix e1_, e2_, normal_;
  Eigen::VectorXd cross_norm_;
  // per face: inverse Cholesky factor [[p, r], [0, s]] of g
  Eigen::VectorXd chol_p_, chol_r_, chol_s_;
  // per face: sqrt of coefficient times area (and 2/det g for the d1 term)
  Eigen::VectorXd w_a1_, w_b1_, w_c1_, w_d1_;
};

/// G_q(h, h) with its gradients in the foot point q and in h.
struct H2EnergyGradient {
  double value = 0.0;
  VertexField d_mesh;
  VertexField d_field;
};

H2EnergyGradient h2_energy_gradient(const TriangleMesh& mesh,
                                    const VertexField& h,
                                    const MetricCoefficients& c);

/// Time-discrete path energy T * sum_t G^d_{q_t}(q_{t+1} - q_t), where the
/// metric and normal variations are differences between consecutive knots
/// and g^-1, areas and cotangent weights are taken at the left knot q_t.
/// All meshes must share one connectivity.
double path_energy(const std::vector<TriangleMesh>& path,
                   const MetricCoefficients& c);

struct PathEnergyGradient {
  double value = 0.0;
  std::vector<VertexField> gradient;  // one per knot, including endpoints
};

PathEnergyGradient path_energy_gradient(const std::vector<TriangleMesh>& path,
                                        const MetricCoefficients& c);

}  // namespace lshape
