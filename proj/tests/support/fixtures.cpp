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

#include "fixtures.hpp"

#include <cmath>
#include <random>

#include "lshape/shapes.hpp"

namespace lshape::testing {

namespace fs = std::filesystem;

TriangleMesh jittered_sphere(int rings, int segments, double jitter, std::uint64_t seed) {
  const TriangleMesh s = shapes::uv_sphere(rings, segments, 0.5);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-jitter, jitter);
  VertexMatrix v = s.vertices();
  for (Index i = 0; i < v.rows(); ++i) v.row(i) *= 1.0 + u(rng);
  return s.with_vertices(v);
}

TriangleMesh ellipsoid(const Vec3& axes, int rings, int segments) {
  return shapes::scale_axes(shapes::uv_sphere(rings, segments, 1.0), axes);
}

VertexField random_field(Index n, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  VertexField h(n, 3);
  for (Index i = 0; i < h.size(); ++i) h.data()[i] = u(rng);
  return h;
}

Eigen::VectorXd random_vector(Index n, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  Eigen::VectorXd x(n);
  for (Index i = 0; i < n; ++i) x[i] = u(rng);
  return x;
}

LatentBasis translation_basis(const TriangleMesh& tmpl) {
  std::vector<VertexField> fields;
  for (int d = 0; d < 3; ++d) {
    VertexField h = VertexField::Zero(tmpl.vertex_count(), 3);
    h.col(d).setOnes();
    fields.push_back(h);
  }
  return LatentBasis(tmpl, fields, 3);
}

LatentBasis smooth_basis(const TriangleMesh& tmpl, int P, std::uint64_t seed, double amplitude,
                         Index shape_count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const VertexMatrix& v = tmpl.vertices();
  std::vector<VertexField> fields;
  for (int p = 0; p < P; ++p) {
    Eigen::Matrix3d a;
    for (int i = 0; i < 9; ++i) a.data()[i] = u(rng);
    const Vec3 b(u(rng), u(rng), u(rng));
    const Vec3 w = 3.0 * Vec3(u(rng), u(rng), u(rng));
    const Vec3 dir = Vec3(u(rng), u(rng), u(rng)).normalized();
    VertexField h(v.rows(), 3);
    for (Index i = 0; i < v.rows(); ++i) {
      const Vec3 x = v.row(i).transpose();
      h.row(i) = (a * x + 0.2 * b + std::sin(w.dot(x)) * dir).transpose();
    }
    h *= amplitude / h.rowwise().norm().maxCoeff();
    fields.push_back(h);
  }
  return LatentBasis(tmpl, fields, shape_count < 0 ? P / 2 : shape_count);
}

Eigen::VectorXd central_difference(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x, double eps) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd y = x;
  for (Index i = 0; i < x.size(); ++i) {
    const double h = eps * std::max(1.0, std::abs(x[i]));
    y[i] = x[i] + h;
    const double fp = f(y);
    y[i] = x[i] - h;
    const double fm = f(y);
    y[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

double relative_error(const Eigen::VectorXd& g, const Eigen::VectorXd& fd, double floor) {
  return (g - fd).lpNorm<Eigen::Infinity>() / std::max(fd.lpNorm<Eigen::Infinity>(), floor);
}

fs::path temp_dir(const std::string& tag) {
  static std::uint64_t counter = 0;
  std::random_device rd;
  const fs::path p = fs::temp_directory_path() /
                     ("lshape_" + tag + "_" + std::to_string(rd()) + "_" + std::to_string(counter++));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace lshape::testing
