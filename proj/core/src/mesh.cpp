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

#include "lshape/mesh.hpp"

#include <cmath>
#include <string>

#include "lshape/error.hpp"

namespace lshape {

VertexMatrix unflatten(const Eigen::Ref<const Eigen::VectorXd>& flat) {
  if (flat.size() % 3 != 0) {
    throw InvalidArgument("flat vertex vector length is not a multiple of 3");
  }
  VertexMatrix out(flat.size() / 3, 3);
  flatten(out) = flat;
  return out;
}

TriangleMesh::TriangleMesh(VertexMatrix vertices, FaceMatrix faces)
    : vertices_(std::move(vertices)),
      faces_(std::make_shared<const FaceMatrix>(std::move(faces))) {
  const Index n = vertices_.rows();
  const FaceMatrix& f = *faces_;
  for (Index i = 0; i < f.rows(); ++i) {
    for (int k = 0; k < 3; ++k) {
      if (f(i, k) < 0 || f(i, k) >= n) {
        throw InvalidArgument("face " + std::to_string(i) +
                              " has out-of-range vertex index " +
                              std::to_string(f(i, k)));
      }
    }
    if (f(i, 0) == f(i, 1) || f(i, 1) == f(i, 2) || f(i, 0) == f(i, 2)) {
      throw DegenerateFaceError(static_cast<std::size_t>(i),
                                "degenerate face (repeated vertex index)");
    }
  }
  validate_geometry();
}

TriangleMesh::TriangleMesh(VertexMatrix vertices,
                           std::shared_ptr<const FaceMatrix> faces)
    : vertices_(std::move(vertices)), faces_(std::move(faces)) {
  validate_geometry();
}

TriangleMesh TriangleMesh::with_vertices(VertexMatrix vertices) const {
  if (vertices.rows() != vertices_.rows()) {
    throw TopologyMismatch("vertex count changed: " +
                           std::to_string(vertices_.rows()) + " -> " +
                           std::to_string(vertices.rows()));
  }
  return TriangleMesh(std::move(vertices), faces_);
}

bool TriangleMesh::same_topology(const TriangleMesh& other) const {
  if (faces_ == other.faces_) return vertex_count() == other.vertex_count();
  return vertex_count() == other.vertex_count() &&
         faces().rows() == other.faces().rows() && faces() == other.faces();
}

void TriangleMesh::validate_geometry() const {
  if (!vertices_.allFinite()) {
    throw InvalidArgument("mesh has non-finite vertex coordinates");
  }
  const FaceMatrix& f = *faces_;
  for (Index i = 0; i < f.rows(); ++i) {
    const Vec3 a = vertices_.row(f(i, 0));
    const Vec3 e1 = Vec3(vertices_.row(f(i, 1))) - a;
    const Vec3 e2 = Vec3(vertices_.row(f(i, 2))) - a;
    const double twice_area = e1.cross(e2).norm();
    if (!(twice_area > 0.0)) {
      throw DegenerateFaceError(static_cast<std::size_t>(i),
                                "degenerate face (zero area)");
    }
  }
}

namespace {

struct Corners {
  Vec3 p0, p1, p2;
};

inline Corners corners(const TriangleMesh& mesh, Index f) {
  const auto& v = mesh.vertices();
  const auto& t = mesh.faces();
  return {v.row(t(f, 0)), v.row(t(f, 1)), v.row(t(f, 2))};
}

}  // namespace

Eigen::VectorXd face_areas(const TriangleMesh& mesh) {
  Eigen::VectorXd areas(mesh.face_count());
  for (Index f = 0; f < mesh.face_count(); ++f) {
    const auto [p0, p1, p2] = corners(mesh, f);
    areas[f] = 0.5 * (p1 - p0).cross(p2 - p0).norm();
  }
  return areas;
}

Eigen::VectorXd vertex_volumes(const TriangleMesh& mesh) {
  const Eigen::VectorXd areas = face_areas(mesh);
  Eigen::VectorXd vol = Eigen::VectorXd::Zero(mesh.vertex_count());
  const auto& t = mesh.faces();
  for (Index f = 0; f < mesh.face_count(); ++f) {
    for (int k = 0; k < 3; ++k) vol[t(f, k)] += areas[f] / 3.0;
  }
  return vol;
}

std::vector<FaceFrame> face_frames(const TriangleMesh& mesh) {
  std::vector<FaceFrame> frames(static_cast<std::size_t>(mesh.face_count()));
  for (Index f = 0; f < mesh.face_count(); ++f) {
    const auto [p0, p1, p2] = corners(mesh, f);
    FaceFrame& fr = frames[static_cast<std::size_t>(f)];
    fr.dq.col(0) = p1 - p0;
    fr.dq.col(1) = p2 - p0;
    fr.g = fr.dq.transpose() * fr.dq;
    const Vec3 c = fr.dq.col(0).cross(fr.dq.col(1));
    const double cn = c.norm();
    fr.n = c / cn;
    fr.area = 0.5 * cn;
  }
  return frames;
}

FaceSamples face_samples(const TriangleMesh& mesh) {
  FaceSamples s;
  const Index m = mesh.face_count();
  s.centers.resize(m, 3);
  s.normals.resize(m, 3);
  s.areas.resize(m);
  for (Index f = 0; f < m; ++f) {
    const auto [p0, p1, p2] = corners(mesh, f);
    const Vec3 c = (p1 - p0).cross(p2 - p0);
    const double cn = c.norm();
    s.centers.row(f) = (p0 + p1 + p2) / 3.0;
    s.normals.row(f) = c / cn;
    s.areas[f] = 0.5 * cn;
  }
  return s;
}

Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor> cotan_weights(
    const TriangleMesh& mesh) {
  Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor> w(
      mesh.face_count(), 3);
  for (Index f = 0; f < mesh.face_count(); ++f) {
    const auto [p0, p1, p2] = corners(mesh, f);
    // |(a - c) x (b - c)| is twice the area for every corner c.
    const double cn = (p1 - p0).cross(p2 - p0).norm();
    w(f, 0) = (p1 - p0).dot(p2 - p0) / cn;
    w(f, 1) = (p2 - p1).dot(p0 - p1) / cn;
    w(f, 2) = (p0 - p2).dot(p1 - p2) / cn;
  }
  return w;
}

VertexField cotan_laplacian_apply(const TriangleMesh& mesh,
                                  const VertexField& h) {
  check_aligned(mesh, h);
  const auto w = cotan_weights(mesh);
  const auto& t = mesh.faces();
  VertexField out = VertexField::Zero(h.rows(), 3);
  for (Index f = 0; f < mesh.face_count(); ++f) {
    for (int k = 0; k < 3; ++k) {
      // corner k weights the opposite edge (a, b)
      const int a = t(f, (k + 1) % 3);
      const int b = t(f, (k + 2) % 3);
      const Eigen::RowVector3d d = w(f, k) * (h.row(a) - h.row(b));
      out.row(a) += d;
      out.row(b) -= d;
    }
  }
  return out;
}

void check_aligned(const TriangleMesh& mesh, const VertexField& field) {
  if (field.rows() != mesh.vertex_count()) {
    throw InvalidArgument("vertex field has " + std::to_string(field.rows()) +
                          " rows, mesh has " +
                          std::to_string(mesh.vertex_count()) + " vertices");
  }
}

double vertex_diameter(const TriangleMesh& mesh) {
  const auto& v = mesh.vertices();
  double best = 0.0;
  for (Index i = 0; i < v.rows(); ++i) {
    for (Index j = i + 1; j < v.rows(); ++j) {
      best = std::max(best, (v.row(i) - v.row(j)).squaredNorm());
    }
  }
  return std::sqrt(best);
}

double mean_triangle_diameter(const TriangleMesh& mesh) {
  double sum = 0.0;
  for (Index f = 0; f < mesh.face_count(); ++f) {
    const auto [p0, p1, p2] = corners(mesh, f);
    sum += std::max({(p1 - p0).norm(), (p2 - p1).norm(), (p0 - p2).norm()});
  }
  return mesh.face_count() > 0 ? sum / static_cast<double>(mesh.face_count())
                               : 0.0;
}

}  // namespace lshape
