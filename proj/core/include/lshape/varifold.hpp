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

#include <memory>
#include <vector>

#include "lshape/mesh.hpp"

namespace lshape {

struct VarifoldSoa;

/// Kernel k(x, n, x', n') = exp(-|x - x'|^2 / sigma^2) (n . n')^2 on face
/// centres and unit normals, weighted by the two face areas.
struct VarifoldConfig {
  double sigma = 0.1;

  /// Throws InvalidArgument unless sigma is finite and positive.
  void validate() const;
};

/// <a, b> = sum over face pairs of k(c_f, n_f, c_g, n_g) area_f area_g.
double varifold_inner(const FaceSamples& a, const FaceSamples& b, double sigma);

/// |a|^2 = <a, a>.
double varifold_norm_sq(const TriangleMesh& a, const VarifoldConfig& cfg);

/// <a, a> - 2 <a, b> + <b, b>, clamped at zero.
double varifold_sqdist(const TriangleMesh& a, const TriangleMesh& b,
                       const VarifoldConfig& cfg);

/// Gradient of varifold_sqdist with respect to the vertices of `a`.
VertexField varifold_grad(const TriangleMesh& a, const TriangleMesh& b,
                          const VarifoldConfig& cfg);

/// Fixed target with its self term cached, for repeated evaluation against
/// moving meshes inside a solver.
class VarifoldTarget {
 public:
  VarifoldTarget(const TriangleMesh& target, const VarifoldConfig& cfg);

  double sigma() const noexcept { return sigma_; }
  double norm_sq() const noexcept { return self_; }

  /// Squared distance from `a` to the target (clamped at zero).
  double sqdist(const TriangleMesh& a) const;

  /// Squared distance and, when `grad` is non-null, its vertex gradient.
  double sqdist(const TriangleMesh& a, VertexField* grad) const;

 private:
  std::shared_ptr<const VarifoldSoa> samples_;
  double sigma_;
  double self_;
};

/// sqrt(varifold_sqdist(a, b)) / |b| for every sigma in `sigmas`.
std::vector<double> remeshing_relative_error(const TriangleMesh& a,
                                             const TriangleMesh& a_remeshed,
                                             const std::vector<double>& sigmas);

}  // namespace lshape
