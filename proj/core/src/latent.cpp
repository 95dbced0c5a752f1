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

#include "lshape/latent.hpp"

#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "lshape/error.hpp"

namespace lshape {

namespace {

void check_path(const LatentBasis& basis, const LatentPath& path) {
  if (path.size() < 2) throw InvalidArgument("latent path needs T >= 1");
  for (const auto& a : path) {
    if (a.size() != basis.dimension()) {
      throw InvalidArgument("latent code length does not match basis");
    }
    if (!a.allFinite()) throw InvalidArgument("latent code is not finite");
  }
}

}  // namespace

LatentBasis::LatentBasis(TriangleMesh template_mesh, Eigen::MatrixXd fields,
                         Index shape_count)
    : template_(std::move(template_mesh)),
      fields_(std::move(fields)),
      shape_count_(shape_count) {
  if (fields_.rows() != 3 * template_.vertex_count()) {
    throw InvalidArgument("basis fields must have 3N rows");
  }
  if (fields_.cols() < 1) throw InvalidArgument("basis needs at least one field");
  if (shape_count_ < 0 || shape_count_ > fields_.cols()) {
    throw InvalidArgument("shape block size out of range");
  }
  if (!fields_.allFinite()) throw InvalidArgument("basis fields are not finite");
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(fields_);
  const auto& s = svd.singularValues();
  if (!(s[0] > 0.0) || s[s.size() - 1] < 1e-8 * s[0]) {
    throw InvalidArgument("basis fields are linearly dependent");
  }
}

LatentBasis::LatentBasis(TriangleMesh template_mesh,
                         const std::vector<VertexField>& fields,
                         Index shape_count)
    : LatentBasis(
          template_mesh,
          [&] {
            Eigen::MatrixXd h(3 * template_mesh.vertex_count(),
                              static_cast<Index>(fields.size()));
            for (std::size_t i = 0; i < fields.size(); ++i) {
              check_aligned(template_mesh, fields[i]);
              h.col(static_cast<Index>(i)) = flatten(fields[i]);
            }
            return h;
          }(),
          shape_count) {}

VertexField LatentBasis::field(Index i) const {
  return unflatten(fields_.col(i));
}

void LatentBasis::check_code(const Eigen::VectorXd& alpha) const {
  if (alpha.size() != dimension()) {
    throw InvalidArgument("latent code has length " +
                          std::to_string(alpha.size()) + ", basis has " +
                          std::to_string(dimension()));
  }
}

VertexField LatentBasis::expand(const Eigen::VectorXd& beta) const {
  check_code(beta);
  return unflatten(fields_ * beta);
}

Eigen::VectorXd LatentBasis::project(const VertexField& g) const {
  check_aligned(template_, g);
  return fields_.transpose() * flatten(g);
}

VertexMatrix LatentBasis::decode_vertices(const LatentCode& alpha) const {
  check_code(alpha);
  VertexMatrix v = template_.vertices();
  flatten(v) += fields_ * alpha;
  return v;
}

TriangleMesh LatentBasis::decode(const LatentCode& alpha) const {
  return template_.with_vertices(decode_vertices(alpha));
}

TriangleMesh decode(const LatentBasis& basis, const LatentCode& alpha) {
  return basis.decode(alpha);
}

Eigen::MatrixXd gram(const LatentBasis& basis, const LatentCode& alpha,
                     const MetricCoefficients& c) {
  const MetricEmbedding emb(basis.decode(alpha), c);
  return emb.gram(basis.fields());
}

double latent_path_energy(const LatentBasis& basis, const LatentPath& path,
                          const MetricCoefficients& c) {
  check_path(basis, path);
  c.validate();
  const double steps = static_cast<double>(path.size() - 1);
  double total = 0.0;
  for (std::size_t t = 0; t + 1 < path.size(); ++t) {
    const MetricEmbedding emb(basis.decode(path[t]), c);
    total += emb.embed(basis.expand(path[t + 1] - path[t])).squaredNorm();
  }
  return steps * total;
}

LatentPathEnergyGradient latent_path_energy_gradient(
    const LatentBasis& basis, const LatentPath& path,
    const MetricCoefficients& c) {
  check_path(basis, path);
  c.validate();
  const double steps = static_cast<double>(path.size() - 1);
  LatentPathEnergyGradient out;
  out.gradient.assign(path.size(), Eigen::VectorXd::Zero(basis.dimension()));
  for (std::size_t t = 0; t + 1 < path.size(); ++t) {
    const Eigen::VectorXd delta = path[t + 1] - path[t];
    const H2EnergyGradient g =
        h2_energy_gradient(basis.decode(path[t]), basis.expand(delta), c);
    out.value += g.value;
    const Eigen::VectorXd d_mesh = basis.project(g.d_mesh);
    const Eigen::VectorXd d_field = basis.project(g.d_field);
    out.gradient[t] += steps * (d_mesh - d_field);
    out.gradient[t + 1] += steps * d_field;
  }
  out.value *= steps;
  return out;
}

Eigen::MatrixXd gram_directional_derivative(const LatentBasis& basis,
                                            const LatentCode& alpha,
                                            const Eigen::VectorXd& beta,
                                            const MetricCoefficients& c,
                                            std::optional<double> eps) {
  if (beta.size() != basis.dimension()) {
    throw InvalidArgument("direction length does not match basis");
  }
  const Index p = basis.dimension();
  if (beta.isZero(0.0)) return Eigen::MatrixXd::Zero(p, p);
  const double h = eps.value_or(1e-5 * (1.0 + alpha.norm()));
  if (!(h > 0.0)) throw InvalidArgument("finite-difference step must be positive");
  const Eigen::MatrixXd plus = gram(basis, alpha + h * beta, c);
  const Eigen::MatrixXd minus = gram(basis, alpha - h * beta, c);
  return (plus - minus) / (2.0 * h);
}

LatentPath substitute_shape_block(const LatentPath& path,
                                  const LatentCode& target_shape,
                                  Index shape_count) {
  if (shape_count < 0 || target_shape.size() < shape_count) {
    throw InvalidArgument("target code is shorter than the shape block");
  }
  LatentPath out;
  out.reserve(path.size());
  for (const auto& a : path) {
    if (a.size() != target_shape.size()) {
      throw InvalidArgument("code length does not match the target code");
    }
    LatentCode b = a;
    b.head(shape_count) = target_shape.head(shape_count);
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace lshape
