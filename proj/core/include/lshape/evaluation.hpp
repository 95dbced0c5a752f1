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
#include <string>
#include <utility>
#include <vector>

#include "lshape/mesh.hpp"

namespace lshape {

/// Vertex-sampled symmetric Hausdorff distance.
double hausdorff(const VertexMatrix& a, const VertexMatrix& b);
double hausdorff(const TriangleMesh& a, const TriangleMesh& b);

/// Mean nearest-vertex distance from a to b plus the mean from b to a.
double chamfer(const VertexMatrix& a, const VertexMatrix& b);
double chamfer(const TriangleMesh& a, const TriangleMesh& b);

/// (1/N) sum_i |a_i - b_i|^2 for meshes sharing one connectivity.
double registered_mse(const TriangleMesh& a, const TriangleMesh& b);

/// Snaps each predicted vertex i to its nearest truth vertex j(i) and
/// averages the shortest edge-path length between j(i) and i on the truth
/// graph. Throws InvalidArgument if the graph is disconnected.
double geodesic_correspondence_error(const TriangleMesh& pred,
                                     const TriangleMesh& truth);

/// Graph form: `edges` are undirected vertex pairs of the truth graph.
double geodesic_correspondence_error(
    const VertexMatrix& pred, const VertexMatrix& truth,
    const std::vector<std::pair<int, int>>& edges);

/// Named metric values for one mesh pair.
struct EvalReport {
  std::string source;
  std::string reference;
  std::vector<std::pair<std::string, double>> values;

  std::optional<double> get(const std::string& name) const;
};

/// Hausdorff, Chamfer and, when sigma is given, relative varifold error;
/// registered MSE and geodesic error are added for same-topology pairs.
EvalReport evaluate_pair(const TriangleMesh& a, const TriangleMesh& b,
                         std::optional<double> sigma = {});

}  // namespace lshape
