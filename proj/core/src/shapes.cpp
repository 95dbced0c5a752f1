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

#include "lshape/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <utility>

#include <Eigen/Geometry>

#include "lshape/error.hpp"

namespace lshape::shapes {

namespace {

constexpr double kPi = 3.14159265358979323846;

using EdgeKey = std::pair<int, int>;

EdgeKey undirected(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

}  // namespace

TriangleMesh icosphere(int levels, double radius) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  VertexMatrix v(12, 3);
  v << -1, t, 0, 1, t, 0, -1, -t, 0, 1, -t, 0,  //
      0, -1, t, 0, 1, t, 0, -1, -t, 0, 1, -t,   //
      t, 0, -1, t, 0, 1, -t, 0, -1, -t, 0, 1;
  v.rowwise().normalize();
  v *= radius;
  FaceMatrix f(20, 3);
  f << 0, 11, 5, 0, 5, 1, 0, 1, 7, 0, 7, 10, 0, 10, 11,  //
      1, 5, 9, 5, 11, 4, 11, 10, 2, 10, 7, 6, 7, 1, 8,    //
      3, 9, 4, 3, 4, 2, 3, 2, 6, 3, 6, 8, 3, 8, 9,        //
      4, 9, 5, 2, 4, 11, 6, 2, 10, 8, 6, 7, 9, 8, 1;
  TriangleMesh mesh(std::move(v), std::move(f));
  for (int l = 0; l < levels; ++l) mesh = subdivide(mesh, radius);
  return mesh;
}

TriangleMesh uv_sphere(int rings, int segments, double radius) {
  if (rings < 2 || segments < 3) {
    throw InvalidArgument("uv_sphere needs rings >= 2 and segments >= 3");
  }
  const int n = 2 + (rings - 1) * segments;
  VertexMatrix v(n, 3);
  v.row(0) << 0, 0, radius;
  v.row(n - 1) << 0, 0, -radius;
  for (int r = 1; r < rings; ++r) {
    const double theta = kPi * r / rings;
    for (int s = 0; s < segments; ++s) {
      const double phi = 2.0 * kPi * s / segments;
      v.row(1 + (r - 1) * segments + s) << radius * std::sin(theta) *
                                               std::cos(phi),
          radius * std::sin(theta) * std::sin(phi), radius * std::cos(theta);
    }
  }
  std::vector<int> idx;
  auto ring = [&](int r, int s) { return 1 + (r - 1) * segments + (s % segments); };
  for (int s = 0; s < segments; ++s) {
    idx.insert(idx.end(), {0, ring(1, s), ring(1, s + 1)});
  }
  for (int r = 1; r + 1 < rings; ++r) {
    for (int s = 0; s < segments; ++s) {
      const int a = ring(r, s), b = ring(r, s + 1);
      const int c = ring(r + 1, s), d = ring(r + 1, s + 1);
      idx.insert(idx.end(), {a, c, d});
      idx.insert(idx.end(), {a, d, b});
    }
  }
  for (int s = 0; s < segments; ++s) {
    idx.insert(idx.end(), {n - 1, ring(rings - 1, s + 1), ring(rings - 1, s)});
  }
  FaceMatrix f(static_cast<Index>(idx.size() / 3), 3);
  std::copy(idx.begin(), idx.end(), f.data());
  return TriangleMesh(std::move(v), std::move(f));
}

TriangleMesh grid(int nx, int ny, double sx, double sy) {
  VertexMatrix v((nx + 1) * (ny + 1), 3);
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      v.row(j * (nx + 1) + i) << sx * i / nx, sy * j / ny, 0.0;
    }
  }
  FaceMatrix f(2 * nx * ny, 3);
  int k = 0;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int a = j * (nx + 1) + i, b = a + 1, c = a + nx + 1, d = c + 1;
      f.row(k++) << a, b, d;
      f.row(k++) << a, d, c;
    }
  }
  return TriangleMesh(std::move(v), std::move(f));
}

TriangleMesh subdivide(const TriangleMesh& mesh, double project_radius) {
  std::map<EdgeKey, int> midpoint;
  std::vector<Vec3> verts;
  verts.reserve(static_cast<std::size_t>(mesh.vertex_count()));
  for (Index i = 0; i < mesh.vertex_count(); ++i) {
    verts.emplace_back(mesh.vertices().row(i));
  }
  auto mid = [&](int a, int b) {
    const auto key = undirected(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    Vec3 p = 0.5 * (verts[a] + verts[b]);
    if (project_radius > 0) p = p.normalized() * project_radius;
    verts.push_back(p);
    const int id = static_cast<int>(verts.size()) - 1;
    midpoint.emplace(key, id);
    return id;
  };
  const auto& f = mesh.faces();
  FaceMatrix out(4 * f.rows(), 3);
  for (Index i = 0; i < f.rows(); ++i) {
    const int a = f(i, 0), b = f(i, 1), c = f(i, 2);
    const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
    out.row(4 * i + 0) << a, ab, ca;
    out.row(4 * i + 1) << ab, b, bc;
    out.row(4 * i + 2) << ca, bc, c;
    out.row(4 * i + 3) << ab, bc, ca;
  }
  VertexMatrix v(static_cast<Index>(verts.size()), 3);
  for (std::size_t i = 0; i < verts.size(); ++i) {
    v.row(static_cast<Index>(i)) = verts[i];
  }
  return TriangleMesh(std::move(v), std::move(out));
}

TriangleMesh scale_axes(const TriangleMesh& mesh, const Vec3& axes) {
  VertexMatrix v = mesh.vertices() * axes.asDiagonal();
  return mesh.with_vertices(std::move(v));
}

TriangleMesh bend(const TriangleMesh& mesh, double curvature) {
  if (curvature == 0.0) return mesh;
  const double r = 1.0 / curvature;
  VertexMatrix v = mesh.vertices();
  for (Index i = 0; i < v.rows(); ++i) {
    const double x = v(i, 0), y = v(i, 1);
    const double theta = curvature * y;
    v(i, 0) = r - (r - x) * std::cos(theta);
    v(i, 1) = (r - x) * std::sin(theta);
  }
  return mesh.with_vertices(std::move(v));
}

TriangleMesh normalize_to_unit_diameter(const TriangleMesh& mesh,
                                        double* scale_out) {
  const double d = vertex_diameter(mesh);
  if (!(d > 0)) throw InvalidArgument("mesh has zero diameter");
  if (scale_out) *scale_out = 1.0 / d;
  return mesh.with_vertices(mesh.vertices() / d);
}

TriangleMesh permute_vertices(const TriangleMesh& mesh, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Index n = mesh.vertex_count();
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  // old index i -> new index perm[i]
  VertexMatrix v(n, 3);
  for (Index i = 0; i < n; ++i) v.row(perm[i]) = mesh.vertices().row(i);
  const auto& f = mesh.faces();
  std::vector<Index> order(static_cast<std::size_t>(f.rows()));
  std::iota(order.begin(), order.end(), Index{0});
  std::shuffle(order.begin(), order.end(), rng);
  FaceMatrix out(f.rows(), 3);
  for (Index k = 0; k < f.rows(); ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    // keep orientation, rotate the starting corner
    const int shift = static_cast<int>(k % 3);
    for (int c = 0; c < 3; ++c) out(k, c) = perm[f(src, (c + shift) % 3)];
  }
  return TriangleMesh(std::move(v), std::move(out));
}

TriangleMesh flip_edges(const TriangleMesh& mesh, int count,
                        std::uint64_t seed) {
  FaceMatrix f = mesh.faces();
  const auto& v = mesh.vertices();
  // directed edge (a, b) -> face containing it as a->b
  std::map<EdgeKey, Index> directed;
  for (Index i = 0; i < f.rows(); ++i) {
    for (int k = 0; k < 3; ++k) directed[{f(i, k), f(i, (k + 1) % 3)}] = i;
  }
  std::set<EdgeKey> edges;
  for (const auto& [e, face] : directed) edges.insert(undirected(e.first, e.second));
  std::vector<EdgeKey> candidates(edges.begin(), edges.end());
  std::mt19937_64 rng(seed);
  std::shuffle(candidates.begin(), candidates.end(), rng);

  std::vector<bool> touched(static_cast<std::size_t>(f.rows()), false);
  auto third = [&](Index face, int a, int b) {
    for (int k = 0; k < 3; ++k) {
      if (f(face, k) != a && f(face, k) != b) return f(face, k);
    }
    return -1;
  };
  auto normal = [&](int a, int b, int c) {
    return Vec3((Vec3(v.row(b)) - Vec3(v.row(a))).cross(Vec3(v.row(c)) - Vec3(v.row(a))));
  };
  int flipped = 0;
  for (const auto& [p, q] : candidates) {
    if (flipped >= count) break;
    auto it1 = directed.find({p, q});
    auto it2 = directed.find({q, p});
    if (it1 == directed.end() || it2 == directed.end()) continue;  // boundary
    const Index f1 = it1->second, f2 = it2->second;
    // a flip invalidates the directed map around these faces; flip each face
    // at most once so the map stays accurate for the remaining candidates
    if (touched[f1] || touched[f2]) continue;
    const int a = p, b = q;
    const int c = third(f1, a, b), d = third(f2, a, b);
    if (c == d || edges.count(undirected(c, d))) continue;
    const Vec3 n1 = normal(a, b, c), n2 = normal(b, a, d);
    const Vec3 m1 = normal(c, a, d), m2 = normal(d, b, c);
    const Vec3 avg = n1 + n2;
    const double tol = 1e-3 * (n1.norm() + n2.norm());
    if (m1.norm() <= tol || m2.norm() <= tol || avg.norm() <= tol) continue;
    // new faces stay within 60 degrees of the quad's mean normal
    const double cos_max = 0.5 * avg.norm();
    if (m1.dot(avg) < cos_max * m1.norm() || m2.dot(avg) < cos_max * m2.norm()) continue;
    f.row(f1) << c, a, d;
    f.row(f2) << d, b, c;
    touched[f1] = touched[f2] = true;
    edges.erase(undirected(a, b));
    edges.insert(undirected(c, d));
    ++flipped;
  }
  return TriangleMesh(mesh.vertices(), std::move(f));
}

TriangleMesh flip_orientation(const TriangleMesh& mesh) {
  FaceMatrix f = mesh.faces();
  f.col(1).swap(f.col(2));
  return TriangleMesh(mesh.vertices(), std::move(f));
}

TriangleMesh transform(const TriangleMesh& mesh, const Eigen::Matrix3d& R,
                       const Vec3& t) {
  VertexMatrix v = (mesh.vertices() * R.transpose()).rowwise() + t.transpose();
  return mesh.with_vertices(std::move(v));
}

Eigen::Matrix3d random_rotation(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::Quaterniond q(normal(rng), normal(rng), normal(rng), normal(rng));
  q.normalize();
  return q.toRotationMatrix();
}

}  // namespace lshape::shapes
