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

#include "lshape/metric.hpp"

#include <atomic>
#include <cmath>
#include <string>

#include <Eigen/Geometry>
#include <Eigen/LU>
#include <spdlog/spdlog.h>

#include "lshape/error.hpp"
#include "metric_kernels.hpp"

namespace lshape {

namespace {

constexpr double kMaxCondition = 1e12;

void warn_if_degenerate(const MetricCoefficients& c) {
  static std::atomic<bool> warned{false};
  if (!c.nondegenerate() && !warned.exchange(true)) {
    spdlog::warn(
        "metric coefficients ({}, {}, {}, {}, {}, {}) fail the "
        "non-degeneracy condition; distances may vanish between distinct "
        "shapes",
        c.a0, c.a1, c.b1, c.c1, c.d1, c.a2);
  }
}

void check_condition(double g11, double g12, double g22, Index face) {
  const double tr = g11 + g22;
  const double det = g11 * g22 - g12 * g12;
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  const double lmax = tr / 2.0 + disc;
  const double lmin = det / lmax;  // product of eigenvalues is det
  if (!(lmin > 0.0) || lmax / lmin > kMaxCondition) {
    throw DegenerateFaceError(static_cast<std::size_t>(face),
                              "first fundamental form condition number exceeds 1e12");
  }
}

void gather(const VertexMatrix& v, const FaceMatrix& f, Index face, Vec3 out[3]) {
  for (int k = 0; k < 3; ++k) out[k] = v.row(f(face, k));
}

void scatter(VertexMatrix& v, const FaceMatrix& f, Index face,
             const double* grad9) {
  for (int k = 0; k < 3; ++k) {
    v(f(face, k), 0) += grad9[3 * k + 0];
    v(f(face, k), 1) += grad9[3 * k + 1];
    v(f(face, k), 2) += grad9[3 * k + 2];
  }
}

// sum_i |L_i|^2 vol_i together with the frozen adjoint data needed to
// differentiate it face by face.
struct LaplaceTerm {
  double value = 0.0;
  VertexField lambda;
  Eigen::VectorXd mu;
};

LaplaceTerm laplace_term(const TriangleMesh& mesh, const VertexField& h) {
  LaplaceTerm t;
  const VertexField lap = cotan_laplacian_apply(mesh, h);
  const Eigen::VectorXd vol = vertex_volumes(mesh);
  t.mu = lap.rowwise().squaredNorm();
  t.value = t.mu.dot(vol);
  t.lambda = 2.0 * (lap.array().colwise() * vol.array()).matrix();
  return t;
}

detail::LaplaceAdjoint adjoint_for_face(const LaplaceTerm& t,
                                        const FaceMatrix& f, Index face) {
  detail::LaplaceAdjoint adj;
  for (int k = 0; k < 3; ++k) {
    adj.lambda[k] = t.lambda.row(f(face, k));
    adj.mu[k] = t.mu[f(face, k)];
  }
  return adj;
}

}  // namespace

bool MetricCoefficients::nondegenerate() const {
  const bool first_order = a1 > 0 && b1 > 0 && c1 > 0 && d1 > 0;
  return a0 > 0 && (first_order || a2 > 0);
}

void MetricCoefficients::validate() const {
  for (double w : as_array()) {
    if (!std::isfinite(w) || w < 0) {
      throw InvalidArgument("metric coefficients must be finite and >= 0");
    }
  }
}

double H2TermValues::total() const {
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

MetricTerms metric_terms(const TriangleMesh& mesh, const VertexField& h) {
  check_aligned(mesh, h);
  const auto frames = face_frames(mesh);
  const auto& f = mesh.faces();
  MetricTerms out;
  out.delta_g.resize(frames.size());
  out.dh.resize(frames.size());
  out.delta_n.resize(mesh.face_count(), 3);
  for (Index i = 0; i < mesh.face_count(); ++i) {
    const FaceFrame& fr = frames[static_cast<std::size_t>(i)];
    Eigen::Matrix<double, 3, 2> dh;
    dh.col(0) = (h.row(f(i, 1)) - h.row(f(i, 0))).transpose();
    dh.col(1) = (h.row(f(i, 2)) - h.row(f(i, 0))).transpose();
    out.dh[static_cast<std::size_t>(i)] = dh;
    out.delta_g[static_cast<std::size_t>(i)] =
        fr.dq.transpose() * dh + dh.transpose() * fr.dq;
    const Vec3 du = dh.col(0).cross(fr.dq.col(1)) + fr.dq.col(0).cross(dh.col(1));
    const double un = 2.0 * fr.area;
    out.delta_n.row(i) = ((Eigen::Matrix3d::Identity() - fr.n * fr.n.transpose()) * du / un).transpose();
  }
  out.laplacian = cotan_laplacian_apply(mesh, h);
  return out;
}

H2TermValues h2_terms(const TriangleMesh& mesh, const VertexField& h,
                      const VertexField& k, const MetricCoefficients& c) {
  check_aligned(mesh, h);
  check_aligned(mesh, k);
  const auto frames = face_frames(mesh);
  const MetricTerms th = metric_terms(mesh, h);
  const MetricTerms tk = metric_terms(mesh, k);
  const Eigen::VectorXd vol = vertex_volumes(mesh);
  H2TermValues out;
  double l2 = 0, shear = 0, stretch = 0, bend = 0, rot = 0, lap = 0;
  for (Index i = 0; i < mesh.vertex_count(); ++i) {
    l2 += h.row(i).dot(k.row(i)) * vol[i];
    lap += th.laplacian.row(i).dot(tk.laplacian.row(i)) * vol[i];
  }
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const FaceFrame& fr = frames[i];
    check_condition(fr.g(0, 0), fr.g(0, 1), fr.g(1, 1), static_cast<Index>(i));
    const Eigen::Matrix2d ginv = fr.g.inverse();
    const Eigen::Matrix2d xh = ginv * th.delta_g[i];
    const Eigen::Matrix2d xk = ginv * tk.delta_g[i];
    shear += (xh * xk).trace() * fr.area;
    stretch += xh.trace() * xk.trace() * fr.area;
    bend += th.delta_n.row(static_cast<Index>(i)).dot(tk.delta_n.row(static_cast<Index>(i))) * fr.area;
    const Eigen::Matrix2d xi_h = fr.dq.transpose() * th.dh[i] - th.dh[i].transpose() * fr.dq;
    const Eigen::Matrix2d xi_k = fr.dq.transpose() * tk.dh[i] - tk.dh[i].transpose() * fr.dq;
    rot += (ginv * xi_h * ginv * xi_k.transpose()).trace() * fr.area;
  }
  out.terms = {c.a0 * l2, c.a1 * shear, c.b1 * stretch,
               c.c1 * bend, c.d1 * rot, c.a2 * lap};
  return out;
}

double h2_inner(const TriangleMesh& mesh, const VertexField& h,
                const VertexField& k, const MetricCoefficients& c) {
  c.validate();
  warn_if_degenerate(c);
  check_aligned(mesh, h);
  check_aligned(mesh, k);
  const MetricEmbedding emb(mesh, c);
  return emb.embed(h).dot(emb.embed(k));
}

// ------------------------------------------------------------ embedding

MetricEmbedding::MetricEmbedding(const TriangleMesh& mesh,
                                 const MetricCoefficients& c)
    : n_(mesh.vertex_count()), m_(mesh.face_count()), faces_(mesh.faces()) {
  c.validate();
  const Eigen::VectorXd vol = vertex_volumes(mesh);
  sqrt_a0_vol_ = (c.a0 * vol).cwiseSqrt();
  sqrt_a2_vol_ = (c.a2 * vol).cwiseSqrt();
  cot_ = cotan_weights(mesh);
  e1_.resize(m_, 3);
  e2_.resize(m_, 3);
  normal_.resize(m_, 3);
  cross_norm_.resize(m_);
  chol_p_.resize(m_);
  chol_r_.resize(m_);
  chol_s_.resize(m_);
  w_a1_.resize(m_);
  w_b1_.resize(m_);
  w_c1_.resize(m_);
  w_d1_.resize(m_);
  const auto& v = mesh.vertices();
  for (Index i = 0; i < m_; ++i) {
    const Vec3 p0 = v.row(faces_(i, 0));
    const Vec3 e1 = Vec3(v.row(faces_(i, 1))) - p0;
    const Vec3 e2 = Vec3(v.row(faces_(i, 2))) - p0;
    const Vec3 u = e1.cross(e2);
    const double un = u.norm();
    const double area = 0.5 * un;
    const double g11 = e1.squaredNorm(), g12 = e1.dot(e2), g22 = e2.squaredNorm();
    check_condition(g11, g12, g22, i);
    // g = R^T R with R = [[r11, r12], [0, r22]]; store R^-1 = [[p, r], [0, s]]
    const double r11 = std::sqrt(g11);
    const double r12 = g12 / r11;
    const double r22 = std::sqrt(g22 - r12 * r12);
    chol_p_[i] = 1.0 / r11;
    chol_r_[i] = -r12 / (r11 * r22);
    chol_s_[i] = 1.0 / r22;
    const double det = g11 * g22 - g12 * g12;
    e1_.row(i) = e1;
    e2_.row(i) = e2;
    normal_.row(i) = u / un;
    cross_norm_[i] = un;
    w_a1_[i] = std::sqrt(c.a1 * area);
    w_b1_[i] = std::sqrt(c.b1 * area);
    w_c1_[i] = std::sqrt(c.c1 * area);
    w_d1_[i] = std::sqrt(c.d1 * area * 2.0 / det);
  }
}

void MetricEmbedding::embed_flat(const double* h, double* out) const {
  // [ a0: 3N | a2: 3N | per face: a1 (3), b1 (1), c1 (3), d1 (1) ]
  double* lap = out + 3 * n_;
  for (Index i = 0; i < n_; ++i) {
    for (int k = 0; k < 3; ++k) {
      out[3 * i + k] = sqrt_a0_vol_[i] * h[3 * i + k];
      lap[3 * i + k] = 0.0;
    }
  }
  double* face_out = out + 6 * n_;
  for (Index f = 0; f < m_; ++f) {
    const int i0 = faces_(f, 0), i1 = faces_(f, 1), i2 = faces_(f, 2);
    const Vec3 h0(h[3 * i0], h[3 * i0 + 1], h[3 * i0 + 2]);
    const Vec3 h1(h[3 * i1], h[3 * i1 + 1], h[3 * i1 + 2]);
    const Vec3 h2(h[3 * i2], h[3 * i2 + 1], h[3 * i2 + 2]);
    const int idx[3] = {i0, i1, i2};
    const Vec3* hv[3] = {&h0, &h1, &h2};
    for (int k = 0; k < 3; ++k) {
      const int a = (k + 1) % 3, b = (k + 2) % 3;
      const Vec3 d = cot_(f, k) * (*hv[a] - *hv[b]);
      for (int x = 0; x < 3; ++x) {
        lap[3 * idx[a] + x] += d[x];
        lap[3 * idx[b] + x] -= d[x];
      }
    }
    const Vec3 e1 = e1_.row(f), e2 = e2_.row(f), n = normal_.row(f);
    const Vec3 d1 = h1 - h0, d2 = h2 - h0;
    // dg (symmetric), S = R^-T dg R^-1
    const double dg11 = 2.0 * e1.dot(d1);
    const double dg12 = e1.dot(d2) + d1.dot(e2);
    const double dg22 = 2.0 * e2.dot(d2);
    const double p = chol_p_[f], r = chol_r_[f], s = chol_s_[f];
    const double s11 = p * p * dg11;
    const double s12 = p * (r * dg11 + s * dg12);
    const double s22 = r * r * dg11 + 2.0 * r * s * dg12 + s * s * dg22;
    const Vec3 du = d1.cross(e2) + e1.cross(d2);
    const Vec3 dn = (du - n * n.dot(du)) / cross_norm_[f];
    const double rot = e1.dot(d2) - d1.dot(e2);
    double* o = face_out + 8 * f;
    o[0] = w_a1_[f] * s11;
    o[1] = w_a1_[f] * std::sqrt(2.0) * s12;
    o[2] = w_a1_[f] * s22;
    o[3] = w_b1_[f] * (s11 + s22);
    o[4] = w_c1_[f] * dn.x();
    o[5] = w_c1_[f] * dn.y();
    o[6] = w_c1_[f] * dn.z();
    o[7] = w_d1_[f] * rot;
  }
  for (Index i = 0; i < n_; ++i) {
    for (int k = 0; k < 3; ++k) lap[3 * i + k] *= sqrt_a2_vol_[i];
  }
}

Eigen::VectorXd MetricEmbedding::embed(const VertexField& h) const {
  if (h.rows() != n_) {
    throw InvalidArgument("vertex field does not match embedding mesh");
  }
  Eigen::VectorXd out(dimension());
  embed_flat(h.data(), out.data());
  return out;
}

Eigen::MatrixXd MetricEmbedding::gram(const Eigen::MatrixXd& fields) const {
  if (fields.rows() != 3 * n_) {
    throw InvalidArgument("field matrix must have 3N rows");
  }
  const Index p = fields.cols();
  Eigen::MatrixXd phi(dimension(), p);
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < p; ++j) {
    embed_flat(fields.col(j).data(), phi.col(j).data());
  }
  Eigen::MatrixXd g = phi.transpose() * phi;
  // exact symmetry regardless of GEMM blocking
  return (0.5 * (g + g.transpose())).eval();
}

// ------------------------------------------------------------ gradients

H2EnergyGradient h2_energy_gradient(const TriangleMesh& mesh,
                                    const VertexField& h,
                                    const MetricCoefficients& c) {
  check_aligned(mesh, h);
  const auto& v = mesh.vertices();
  const auto& f = mesh.faces();
  H2EnergyGradient out;
  out.d_mesh = VertexField::Zero(v.rows(), 3);
  out.d_field = VertexField::Zero(v.rows(), 3);
  LaplaceTerm lap;
  if (c.a2 != 0.0) lap = laplace_term(mesh, h);
  double value = c.a2 * lap.value;
  for (Index i = 0; i < f.rows(); ++i) {
    Vec3 q[3], hv[3];
    gather(v, f, i, q);
    gather(h, f, i, hv);
    check_condition(q[1].cwiseProduct(q[1]).sum() - 2 * q[1].dot(q[0]) + q[0].squaredNorm(),
                    (q[1] - q[0]).dot(q[2] - q[0]), (q[2] - q[0]).squaredNorm(), i);
    detail::LaplaceAdjoint adj;
    if (c.a2 != 0.0) adj = adjoint_for_face(lap, f, i);
    Eigen::Matrix<double, 18, 1> grad;
    detail::face_energy_gradient(q, hv, c, detail::Variation::analytic,
                                 c.a2 != 0.0 ? &adj : nullptr, grad);
    // the surrogate's value is not the a2 term; take face values from the
    // plain kernel
    value += detail::face_energy<double>(q, hv, c, detail::Variation::analytic,
                                         nullptr);
    scatter(out.d_mesh, f, i, grad.data());
    scatter(out.d_field, f, i, grad.data() + 9);
  }
  out.value = value;
  return out;
}

namespace {

void check_path(const std::vector<TriangleMesh>& path) {
  if (path.size() < 2) throw InvalidArgument("path needs at least two knots");
  for (const auto& m : path) {
    if (!m.same_topology(path.front())) {
      throw TopologyMismatch("path knots do not share one connectivity");
    }
  }
}

}  // namespace

double path_energy(const std::vector<TriangleMesh>& path,
                   const MetricCoefficients& c) {
  check_path(path);
  c.validate();
  const double steps = static_cast<double>(path.size() - 1);
  const auto& f = path.front().faces();
  double total = 0.0;
  for (std::size_t t = 0; t + 1 < path.size(); ++t) {
    const VertexMatrix& v = path[t].vertices();
    const VertexField dq = path[t + 1].vertices() - v;
    double step = 0.0;
    for (Index i = 0; i < f.rows(); ++i) {
      Vec3 q[3], h[3];
      gather(v, f, i, q);
      gather(dq, f, i, h);
      const Vec3 e1 = q[1] - q[0], e2 = q[2] - q[0];
      check_condition(e1.squaredNorm(), e1.dot(e2), e2.squaredNorm(), i);
      step += detail::face_energy<double>(
          q, h, c, detail::Variation::finite_difference, nullptr);
    }
    if (c.a2 != 0.0) step += c.a2 * laplace_term(path[t], dq).value;
    total += step;
  }
  return steps * total;
}

PathEnergyGradient path_energy_gradient(const std::vector<TriangleMesh>& path,
                                        const MetricCoefficients& c) {
  check_path(path);
  c.validate();
  const double steps = static_cast<double>(path.size() - 1);
  const auto& f = path.front().faces();
  PathEnergyGradient out;
  out.gradient.assign(path.size(),
                      VertexField::Zero(path.front().vertex_count(), 3));
  double total = 0.0;
  for (std::size_t t = 0; t + 1 < path.size(); ++t) {
    const VertexMatrix& v = path[t].vertices();
    const VertexField dq = path[t + 1].vertices() - v;
    LaplaceTerm lap;
    if (c.a2 != 0.0) {
      lap = laplace_term(path[t], dq);
      total += c.a2 * lap.value;
    }
    for (Index i = 0; i < f.rows(); ++i) {
      Vec3 q[3], h[3];
      gather(v, f, i, q);
      gather(dq, f, i, h);
      const Vec3 e1 = q[1] - q[0], e2 = q[2] - q[0];
      check_condition(e1.squaredNorm(), e1.dot(e2), e2.squaredNorm(), i);
      detail::LaplaceAdjoint adj;
      if (c.a2 != 0.0) adj = adjoint_for_face(lap, f, i);
      Eigen::Matrix<double, 18, 1> g;
      detail::face_energy_gradient(q, h, c,
                                   detail::Variation::finite_difference,
                                   c.a2 != 0.0 ? &adj : nullptr, g);
      total += detail::face_energy<double>(
          q, h, c, detail::Variation::finite_difference, nullptr);
      // h = q_{t+1} - q_t: d/dq_t = dE/dq - dE/dh, d/dq_{t+1} = dE/dh
      Eigen::Matrix<double, 9, 1> g_left = g.head<9>() - g.tail<9>();
      Eigen::Matrix<double, 9, 1> g_right = g.tail<9>();
      scatter(out.gradient[t], f, i, g_left.data());
      scatter(out.gradient[t + 1], f, i, g_right.data());
    }
  }
  out.value = steps * total;
  for (auto& g : out.gradient) g *= steps;
  return out;
}

}  // namespace lshape
