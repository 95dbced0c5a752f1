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

#include "lshape/varifold.hpp"

#include <cmath>
#include <vector>

#include "lshape/error.hpp"

namespace lshape {

// Structure-of-arrays copy of face samples for the pair loops.
struct VarifoldSoa {
  std::vector<double> cx, cy, cz, nx, ny, nz, area;
  Index size() const { return static_cast<Index>(area.size()); }
};

namespace {

using Soa = VarifoldSoa;

Soa to_soa(const FaceSamples& s) {
  Soa o;
  const auto m = static_cast<std::size_t>(s.areas.size());
  for (auto* v : {&o.cx, &o.cy, &o.cz, &o.nx, &o.ny, &o.nz, &o.area}) {
    v->resize(m);
  }
  for (std::size_t i = 0; i < m; ++i) {
    const auto r = static_cast<Index>(i);
    o.cx[i] = s.centers(r, 0);
    o.cy[i] = s.centers(r, 1);
    o.cz[i] = s.centers(r, 2);
    o.nx[i] = s.normals(r, 0);
    o.ny[i] = s.normals(r, 1);
    o.nz[i] = s.normals(r, 2);
    o.area[i] = s.areas[r];
  }
  return o;
}

// Sums for one face (c, n) of the left argument against all faces of b:
//   s1 = sum_j K A_j (n . n_j)^2
//   sv = sum_j K A_j (n . n_j) n_j
//   sc = sum_j K A_j (n . n_j)^2 c_j
struct RowSums {
  double s1 = 0.0;
  double sv[3] = {0.0, 0.0, 0.0};
  double sc[3] = {0.0, 0.0, 0.0};
};

inline double row_value(const Soa& b, double x, double y, double z, double px,
                        double py, double pz, double inv_s2) {
  double s1 = 0.0;
  const Index m = b.size();
  const double* __restrict cx = b.cx.data();
  const double* __restrict cy = b.cy.data();
  const double* __restrict cz = b.cz.data();
  const double* __restrict nx = b.nx.data();
  const double* __restrict ny = b.ny.data();
  const double* __restrict nz = b.nz.data();
  const double* __restrict ar = b.area.data();
  for (Index j = 0; j < m; ++j) {
    const double dx = x - cx[j], dy = y - cy[j], dz = z - cz[j];
    const double k = std::exp(-(dx * dx + dy * dy + dz * dz) * inv_s2);
    const double d = px * nx[j] + py * ny[j] + pz * nz[j];
    s1 += k * ar[j] * d * d;
  }
  return s1;
}

inline RowSums row_sums(const Soa& b, double x, double y, double z, double px,
                        double py, double pz, double inv_s2) {
  RowSums r;
  const Index m = b.size();
  for (Index j = 0; j < m; ++j) {
    const double dx = x - b.cx[j], dy = y - b.cy[j], dz = z - b.cz[j];
    const double k = std::exp(-(dx * dx + dy * dy + dz * dz) * inv_s2);
    const double d = px * b.nx[j] + py * b.ny[j] + pz * b.nz[j];
    const double w = k * b.area[j] * d;
    const double wd = w * d;
    r.s1 += wd;
    r.sv[0] += w * b.nx[j];
    r.sv[1] += w * b.ny[j];
    r.sv[2] += w * b.nz[j];
    r.sc[0] += wd * b.cx[j];
    r.sc[1] += wd * b.cy[j];
    r.sc[2] += wd * b.cz[j];
  }
  return r;
}

double inner_soa(const Soa& a, const Soa& b, double sigma) {
  const double inv_s2 = 1.0 / (sigma * sigma);
  const Index m = a.size();
  std::vector<double> rows(static_cast<std::size_t>(m));
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < m; ++i) {
    rows[i] = a.area[i] * row_value(b, a.cx[i], a.cy[i], a.cz[i], a.nx[i],
                                    a.ny[i], a.nz[i], inv_s2);
  }
  double total = 0.0;
  for (double r : rows) total += r;
  return total;
}

// sum_j <a, a> - 2 <a, b> with the gradient in the vertices of a.
double moving_part(const TriangleMesh& mesh, const Soa& a, const Soa& b,
                   double sigma, VertexField* grad) {
  const double inv_s2 = 1.0 / (sigma * sigma);
  const Index m = a.size();
  std::vector<double> rows(static_cast<std::size_t>(m));
  // per face: gradient with respect to u = (e1 x e2) / 2 and to the centre
  Eigen::Matrix<double, Eigen::Dynamic, 6, Eigen::RowMajor> face_grad;
  if (grad) face_grad.resize(m, 6);
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < m; ++i) {
    const double x = a.cx[i], y = a.cy[i], z = a.cz[i];
    const double px = a.nx[i], py = a.ny[i], pz = a.nz[i];
    const double ai = a.area[i];
    if (!grad) {
      rows[i] = ai * (row_value(a, x, y, z, px, py, pz, inv_s2) -
                      2.0 * row_value(b, x, y, z, px, py, pz, inv_s2));
      continue;
    }
    const RowSums ra = row_sums(a, x, y, z, px, py, pz, inv_s2);
    const RowSums rb = row_sums(b, x, y, z, px, py, pz, inv_s2);
    rows[i] = ai * (ra.s1 - 2.0 * rb.s1);
    const double c[3] = {x, y, z};
    const double n[3] = {px, py, pz};
    for (int k = 0; k < 3; ++k) {
      // d/du of A (n.n')^2 A' K is K A' (n.n') (2 n' - (n.n') n); the self
      // term counts twice by symmetry.
      const double gu_a = 2.0 * ra.sv[k] - n[k] * ra.s1;
      const double gu_b = 2.0 * rb.sv[k] - n[k] * rb.s1;
      face_grad(i, k) = 2.0 * gu_a - 2.0 * gu_b;
      const double gc_a = -2.0 * inv_s2 * ai * (c[k] * ra.s1 - ra.sc[k]);
      const double gc_b = -2.0 * inv_s2 * ai * (c[k] * rb.s1 - rb.sc[k]);
      face_grad(i, 3 + k) = 2.0 * gc_a - 2.0 * gc_b;
    }
  }
  double total = 0.0;
  for (double r : rows) total += r;
  if (grad) {
    const auto& v = mesh.vertices();
    const auto& f = mesh.faces();
    *grad = VertexField::Zero(v.rows(), 3);
    for (Index i = 0; i < m; ++i) {
      const Vec3 gu(face_grad(i, 0), face_grad(i, 1), face_grad(i, 2));
      const Vec3 gc(face_grad(i, 3), face_grad(i, 4), face_grad(i, 5));
      const Vec3 p0 = v.row(f(i, 0));
      const Vec3 e1 = Vec3(v.row(f(i, 1))) - p0;
      const Vec3 e2 = Vec3(v.row(f(i, 2))) - p0;
      const Vec3 g1 = 0.5 * e2.cross(gu);
      const Vec3 g2 = 0.5 * gu.cross(e1);
      const Vec3 gcen = gc / 3.0;
      grad->row(f(i, 0)) += (gcen - g1 - g2).transpose();
      grad->row(f(i, 1)) += (gcen + g1).transpose();
      grad->row(f(i, 2)) += (gcen + g2).transpose();
    }
  }
  return total;
}

}  // namespace

void VarifoldConfig::validate() const {
  if (!(std::isfinite(sigma) && sigma > 0.0)) {
    throw InvalidArgument("varifold sigma must be positive");
  }
}

double varifold_inner(const FaceSamples& a, const FaceSamples& b,
                      double sigma) {
  VarifoldConfig{sigma}.validate();
  return inner_soa(to_soa(a), to_soa(b), sigma);
}

double varifold_norm_sq(const TriangleMesh& a, const VarifoldConfig& cfg) {
  cfg.validate();
  const Soa s = to_soa(face_samples(a));
  return inner_soa(s, s, cfg.sigma);
}

double varifold_sqdist(const TriangleMesh& a, const TriangleMesh& b,
                       const VarifoldConfig& cfg) {
  cfg.validate();
  const Soa sa = to_soa(face_samples(a));
  const Soa sb = to_soa(face_samples(b));
  const double d = inner_soa(sa, sa, cfg.sigma) -
                   2.0 * inner_soa(sa, sb, cfg.sigma) +
                   inner_soa(sb, sb, cfg.sigma);
  return d > 0.0 ? d : 0.0;
}

VertexField varifold_grad(const TriangleMesh& a, const TriangleMesh& b,
                          const VarifoldConfig& cfg) {
  cfg.validate();
  const Soa sa = to_soa(face_samples(a));
  const Soa sb = to_soa(face_samples(b));
  VertexField g;
  moving_part(a, sa, sb, cfg.sigma, &g);
  return g;
}

VarifoldTarget::VarifoldTarget(const TriangleMesh& target,
                               const VarifoldConfig& cfg)
    : sigma_(cfg.sigma) {
  cfg.validate();
  auto s = std::make_shared<Soa>(to_soa(face_samples(target)));
  self_ = inner_soa(*s, *s, sigma_);
  samples_ = std::move(s);
}

double VarifoldTarget::sqdist(const TriangleMesh& a) const {
  return sqdist(a, nullptr);
}

double VarifoldTarget::sqdist(const TriangleMesh& a, VertexField* grad) const {
  const Soa sa = to_soa(face_samples(a));
  const double d = moving_part(a, sa, *samples_, sigma_, grad) + self_;
  return d > 0.0 ? d : 0.0;
}

std::vector<double> remeshing_relative_error(const TriangleMesh& a,
                                             const TriangleMesh& a_remeshed,
                                             const std::vector<double>& sigmas) {
  std::vector<double> out;
  out.reserve(sigmas.size());
  for (double s : sigmas) {
    const VarifoldConfig cfg{s};
    const double norm = varifold_norm_sq(a_remeshed, cfg);
    out.push_back(std::sqrt(varifold_sqdist(a, a_remeshed, cfg)) /
                  std::sqrt(norm));
  }
  return out;
}

}  // namespace lshape
