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

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstddef>
#include <memory>
#include <vector>

namespace lshape {

using Index = Eigen::Index;
using Vec3 = Eigen::Vector3d;

/// N x 3 row-major block of per-vertex 3-vectors. Row-major storage lets a
/// field be viewed as a flat 3N vector (x0, y0, z0, x1, ...) without a copy.
using VertexMatrix = Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>;

/// A tangent vector to a mesh: one 3-vector per vertex.
using VertexField = VertexMatrix;

/// M x 3 vertex indices, one oriented triangle per row.
using FaceMatrix = Eigen::Matrix<int, Eigen::Dynamic, 3, Eigen::RowMajor>;

/// Flat 3N view of a vertex field.
inline Eigen::Map<const Eigen::VectorXd> flatten(const VertexMatrix& v) {
  return {v.data(), v.size()};
}
inline Eigen::Map<Eigen::VectorXd> flatten(VertexMatrix& v) {
  return {v.data(), v.size()};
}
/// Inverse of flatten; `flat.size()` must be a multiple of three.
VertexMatrix unflatten(const Eigen::Ref<const Eigen::VectorXd>& flat);

/// Triangle mesh with validated connectivity.
///
/// Construction checks that every face index is in range, that the three
/// indices of a face are distinct, that all coordinates are finite, and that
/// every face has strictly positive area. Faces are shared between meshes
/// produced by with_vertices(), so a path of meshes over one connectivity
/// stores the index buffer once.
class TriangleMesh {
 public:
  TriangleMesh(VertexMatrix vertices, FaceMatrix faces);

  /// Same connectivity, new vertex positions (revalidated).
  TriangleMesh with_vertices(VertexMatrix vertices) const;

  const VertexMatrix& vertices() const noexcept { return vertices_; }
  const FaceMatrix& faces() const noexcept { return *faces_; }
  Index vertex_count() const noexcept { return vertices_.rows(); }
  Index face_count() const noexcept { return faces_->rows(); }

  bool same_topology(const TriangleMesh& other) const;

 private:
  TriangleMesh(VertexMatrix vertices, std::shared_ptr<const FaceMatrix> faces);
  void validate_geometry() const;

  VertexMatrix vertices_;
  std::shared_ptr<const FaceMatrix> faces_;
};

/// Per-face first-order geometry.
struct FaceFrame {
  Eigen::Matrix<double, 3, 2> dq;  // [e01, e02]
  Eigen::Matrix2d g;               // dq^T dq
  Vec3 n;                          // unit normal, stored orientation
  double area = 0.0;
};

/// Face centres, unit normals and areas in structure-of-arrays layout.
struct FaceSamples {
  VertexMatrix centers;
  VertexMatrix normals;
  Eigen::VectorXd areas;
};

/// True triangle areas, 0.5 * |e01 x e02|.
Eigen::VectorXd face_areas(const TriangleMesh& mesh);

/// One third of the area of every incident face; isolated vertices get 0.
Eigen::VectorXd vertex_volumes(const TriangleMesh& mesh);

std::vector<FaceFrame> face_frames(const TriangleMesh& mesh);

FaceSamples face_samples(const TriangleMesh& mesh);

/// Cotangent weights per face: column k holds cot of the angle at corner k,
/// which weights the edge opposite that corner. Obtuse angles stay negative.
Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor> cotan_weights(
    const TriangleMesh& mesh);

/// (L h)_i = sum_j (cot a_ij + cot b_ij) (h_i - h_j). Boundary edges carry the
/// single cotangent of their one incident face.
VertexField cotan_laplacian_apply(const TriangleMesh& mesh,
                                  const VertexField& h);

/// Throws InvalidArgument unless `field` has one row per mesh vertex.
void check_aligned(const TriangleMesh& mesh, const VertexField& field);

/// Diameter of the vertex set (largest pairwise vertex distance).
double vertex_diameter(const TriangleMesh& mesh);

/// Mean over faces of the longest edge length.
double mean_triangle_diameter(const TriangleMesh& mesh);

}  // namespace lshape
