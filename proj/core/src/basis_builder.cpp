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

#include "lshape/basis_builder.hpp"

#include <Eigen/SVD>
#include <spdlog/spdlog.h>

#include "lshape/error.hpp"
#include "lshape/solvers.hpp"

namespace lshape {

namespace {

std::string source_name(const std::vector<std::string>& sources, std::size_t i,
                        const char* fallback) {
  if (i < sources.size()) return sources[i];
  return std::string(fallback) + "[" + std::to_string(i) + "]";
}

}  // namespace

std::vector<TangentSample> shape_tangents(
    const std::vector<TriangleMesh>& meshes, std::size_t template_index,
    const MetricCoefficients& c, int steps, const OptimizerConfig& cfg,
    const std::vector<std::string>& sources) {
  if (template_index >= meshes.size()) {
    throw InvalidArgument("template index out of range");
  }
  const TriangleMesh& tmpl = meshes[template_index];
  for (const auto& m : meshes) {
    if (!m.same_topology(tmpl)) {
      throw TopologyMismatch("training meshes must share the template connectivity");
    }
  }
  std::vector<TangentSample> out;
  for (std::size_t i = 0; i < meshes.size(); ++i) {
    if (i == template_index) continue;
    try {
      const auto sol = parametrized_geodesic(tmpl, meshes[i], steps, c, cfg);
      TangentSample s;
      s.vector = static_cast<double>(steps) *
                 (sol.path[1].vertices() - sol.path[0].vertices());
      s.label = TangentLabel::shape;
      s.source = source_name(sources, i, "mesh");
      out.push_back(std::move(s));
    } catch (const Error& e) {
      spdlog::warn("skipping {}: {}", source_name(sources, i, "mesh"), e.what());
    }
  }
  return out;
}

std::vector<TangentSample> pose_tangents(
    const std::vector<std::vector<TriangleMesh>>& sequences,
    const std::vector<std::string>& sources) {
  std::vector<TangentSample> out;
  const TriangleMesh* ref = nullptr;
  for (std::size_t j = 0; j < sequences.size(); ++j) {
    const auto& seq = sequences[j];
    for (std::size_t t = 0; t < seq.size(); ++t) {
      if (!ref) ref = &seq[t];
      if (!seq[t].same_topology(*ref)) {
        throw TopologyMismatch("sequence frames must share the template connectivity");
      }
      if (t == 0) continue;
      TangentSample s;
      s.vector = seq[t].vertices() - seq[t - 1].vertices();
      s.label = TangentLabel::pose;
      s.source = source_name(sources, j, "sequence") + ":" + std::to_string(t - 1);
      out.push_back(std::move(s));
    }
  }
  return out;
}

PCAResult pca(const std::vector<TangentSample>& samples, int k, bool center) {
  if (samples.size() < 2) throw InvalidArgument("PCA needs at least two samples");
  const Index dim = samples.front().vector.size();
  const auto count = static_cast<Index>(samples.size());
  if (k < 1 || k > std::min(count, dim)) {
    throw InvalidArgument("requested " + std::to_string(k) +
                          " components from " + std::to_string(count) +
                          " samples of dimension " + std::to_string(dim));
  }
  Eigen::MatrixXd x(count, dim);
  for (Index i = 0; i < count; ++i) {
    const auto& v = samples[static_cast<std::size_t>(i)].vector;
    if (v.size() != dim) throw InvalidArgument("tangent samples differ in size");
    x.row(i) = flatten(v).transpose();
  }
  PCAResult out;
  out.mean = center ? Eigen::VectorXd(x.colwise().mean().transpose())
                    : Eigen::VectorXd::Zero(dim);
  if (center) x.rowwise() -= out.mean.transpose();
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinV);
  out.singular_values = svd.singularValues().head(k);
  for (int i = 0; i < k; ++i) {
    Eigen::VectorXd v = svd.matrixV().col(i);
    Index arg;
    v.cwiseAbs().maxCoeff(&arg);
    if (v[arg] < 0) v = -v;
    out.components.push_back(std::move(v));
  }
  return out;
}

LatentBasis assemble_basis(const TriangleMesh& template_mesh,
                           const PCAResult& shape_pca, const PCAResult& pose_pca,
                           int m, int n) {
  if (m < 0 || n < 0 || m + n < 1) throw InvalidArgument("basis needs m + n >= 1");
  if (static_cast<std::size_t>(m) > shape_pca.components.size()) {
    throw InvalidArgument("insufficient shape components: need " + std::to_string(m) +
                          ", have " + std::to_string(shape_pca.components.size()));
  }
  if (static_cast<std::size_t>(n) > pose_pca.components.size()) {
    throw InvalidArgument("insufficient pose components: need " + std::to_string(n) +
                          ", have " + std::to_string(pose_pca.components.size()));
  }
  const Index rows = 3 * template_mesh.vertex_count();
  Eigen::MatrixXd h(rows, m + n);
  for (int i = 0; i < m; ++i) {
    if (shape_pca.components[static_cast<std::size_t>(i)].size() != rows) {
      throw InvalidArgument("shape component does not match template");
    }
    h.col(i) = shape_pca.components[static_cast<std::size_t>(i)];
  }
  for (int i = 0; i < n; ++i) {
    if (pose_pca.components[static_cast<std::size_t>(i)].size() != rows) {
      throw InvalidArgument("pose component does not match template");
    }
    h.col(m + i) = pose_pca.components[static_cast<std::size_t>(i)];
  }
  return LatentBasis(template_mesh, std::move(h), m);
}

}  // namespace lshape
