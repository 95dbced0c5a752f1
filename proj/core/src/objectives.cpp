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

#include "lshape/objectives.hpp"

#include <utility>

#include "lshape/error.hpp"

namespace lshape {

namespace {

void check_steps(int steps) {
  if (steps < 1) throw InvalidArgument("number of time steps must be >= 1");
}

}  // namespace

Eigen::VectorXd stack_codes(const LatentPath& codes, std::size_t first,
                            std::size_t count) {
  if (first + count > codes.size()) throw InvalidArgument("knot range out of bounds");
  if (count == 0) return {};
  const Index p = codes[first].size();
  Eigen::VectorXd x(p * static_cast<Index>(count));
  for (std::size_t i = 0; i < count; ++i) {
    x.segment(p * static_cast<Index>(i), p) = codes[first + i];
  }
  return x;
}

LatentPath unstack_codes(const Eigen::VectorXd& x, Index dim) {
  if (dim <= 0 || x.size() % dim != 0) {
    throw InvalidArgument("stacked vector length is not a multiple of P");
  }
  LatentPath out;
  for (Index i = 0; i < x.size(); i += dim) out.emplace_back(x.segment(i, dim));
  return out;
}

// ------------------------------------------------------------ retrieval

RetrievalObjective::RetrievalObjective(const LatentBasis& basis,
                                       const TriangleMesh& target,
                                       double sigma, double lambda, int steps,
                                       const MetricCoefficients& c)
    : basis_(basis), target_(target, VarifoldConfig{sigma}), lambda_(lambda),
      steps_(steps), c_(c) {
  check_steps(steps);
  if (!(lambda > 0)) throw InvalidArgument("lambda must be positive");
  c.validate();
}

Index RetrievalObjective::size() const { return basis_.dimension() * steps_; }

LatentPath RetrievalObjective::path(const Eigen::VectorXd& x) const {
  LatentPath p{Eigen::VectorXd::Zero(basis_.dimension())};
  for (auto& a : unstack_codes(x, basis_.dimension())) p.push_back(std::move(a));
  return p;
}

Eigen::VectorXd RetrievalObjective::variables(const LatentPath& path) const {
  return stack_codes(path, 1, path.size() - 1);
}

double RetrievalObjective::discrepancy(const Eigen::VectorXd& x) const {
  return target_.sqdist(basis_.decode(x.tail(basis_.dimension())));
}

double RetrievalObjective::operator()(const Eigen::VectorXd& x,
                                      Eigen::VectorXd* grad) const {
  const Index p = basis_.dimension();
  const LatentPath knots = path(x);
  const TriangleMesh end = basis_.decode(knots.back());
  if (!grad) {
    return target_.sqdist(end) + latent_path_energy(basis_, knots, c_) / lambda_;
  }
  VertexField dg;
  const double gamma = target_.sqdist(end, &dg);
  const auto e = latent_path_energy_gradient(basis_, knots, c_);
  grad->resize(x.size());
  for (int t = 1; t <= steps_; ++t) {
    grad->segment(p * (t - 1), p) = e.gradient[static_cast<std::size_t>(t)] / lambda_;
  }
  grad->tail(p) += basis_.project(dg);
  return gamma + e.value / lambda_;
}

// ------------------------------------------------------------ BVP

BvpObjective::BvpObjective(const LatentBasis& basis, LatentCode alpha0,
                           LatentCode alpha1, int steps,
                           const MetricCoefficients& c)
    : basis_(basis), alpha0_(std::move(alpha0)), alpha1_(std::move(alpha1)),
      steps_(steps), c_(c) {
  check_steps(steps);
  if (alpha0_.size() != basis.dimension() || alpha1_.size() != basis.dimension()) {
    throw InvalidArgument("endpoint codes do not match basis dimension");
  }
  c.validate();
}

Index BvpObjective::size() const { return basis_.dimension() * (steps_ - 1); }

LatentPath BvpObjective::path(const Eigen::VectorXd& x) const {
  LatentPath p{alpha0_};
  for (auto& a : unstack_codes(x, basis_.dimension())) p.push_back(std::move(a));
  p.push_back(alpha1_);
  return p;
}

Eigen::VectorXd BvpObjective::variables(const LatentPath& path) const {
  return stack_codes(path, 1, path.size() - 2);
}

double BvpObjective::operator()(const Eigen::VectorXd& x,
                                Eigen::VectorXd* grad) const {
  const Index p = basis_.dimension();
  const LatentPath knots = path(x);
  if (!grad) return latent_path_energy(basis_, knots, c_);
  const auto e = latent_path_energy_gradient(basis_, knots, c_);
  grad->resize(x.size());
  for (int t = 1; t < steps_; ++t) {
    grad->segment(p * (t - 1), p) = e.gradient[static_cast<std::size_t>(t)];
  }
  return e.value;
}

// ------------------------------------------------------------ relaxed

RelaxedObjective::RelaxedObjective(const LatentBasis& basis,
                                   const TriangleMesh& q0,
                                   const TriangleMesh& q1, double sigma,
                                   double lambda, int steps,
                                   const MetricCoefficients& c)
    : basis_(basis), target0_(q0, VarifoldConfig{sigma}),
      target1_(q1, VarifoldConfig{sigma}), lambda_(lambda), steps_(steps), c_(c) {
  check_steps(steps);
  if (!(lambda > 0)) throw InvalidArgument("lambda must be positive");
  c.validate();
}

Index RelaxedObjective::size() const { return basis_.dimension() * (steps_ + 1); }

LatentPath RelaxedObjective::path(const Eigen::VectorXd& x) const {
  return unstack_codes(x, basis_.dimension());
}

Eigen::VectorXd RelaxedObjective::variables(const LatentPath& path) const {
  return stack_codes(path, 0, path.size());
}

std::pair<double, double> RelaxedObjective::discrepancies(
    const Eigen::VectorXd& x) const {
  const Index p = basis_.dimension();
  return {target0_.sqdist(basis_.decode(x.head(p))),
          target1_.sqdist(basis_.decode(x.tail(p)))};
}

double RelaxedObjective::operator()(const Eigen::VectorXd& x,
                                    Eigen::VectorXd* grad) const {
  const Index p = basis_.dimension();
  const LatentPath knots = path(x);
  const TriangleMesh start = basis_.decode(knots.front());
  const TriangleMesh end = basis_.decode(knots.back());
  if (!grad) {
    return latent_path_energy(basis_, knots, c_) +
           lambda_ * (target0_.sqdist(start) + target1_.sqdist(end));
  }
  VertexField d0, d1;
  const double g0 = target0_.sqdist(start, &d0);
  const double g1 = target1_.sqdist(end, &d1);
  const auto e = latent_path_energy_gradient(basis_, knots, c_);
  grad->resize(x.size());
  for (int t = 0; t <= steps_; ++t) {
    grad->segment(p * t, p) = e.gradient[static_cast<std::size_t>(t)];
  }
  grad->head(p) += lambda_ * basis_.project(d0);
  grad->tail(p) += lambda_ * basis_.project(d1);
  return e.value + lambda_ * (g0 + g1);
}

// ------------------------------------------------------------ IVP residual

IvpResidual::IvpResidual(const LatentBasis& basis, const LatentCode& alpha_prev,
                         const LatentCode& alpha_cur,
                         const MetricCoefficients& c,
                         std::optional<double> fd_step) {
  const Index p = basis.dimension();
  g_prev_ = gram(basis, alpha_prev, c);
  g_cur_ = gram(basis, alpha_cur, c);
  d_gram_.reserve(static_cast<std::size_t>(p));
  for (Index i = 0; i < p; ++i) {
    d_gram_.push_back(gram_directional_derivative(
        basis, alpha_cur, Eigen::VectorXd::Unit(p, i), c, fd_step));
  }
  rhs_ = 2.0 * g_prev_ * (alpha_cur - alpha_prev);
}

IvpResidual::IvpResidual(Eigen::MatrixXd g_prev, Eigen::MatrixXd g_cur,
                         std::vector<Eigen::MatrixXd> d_gram,
                         Eigen::VectorXd beta0)
    : g_prev_(std::move(g_prev)), g_cur_(std::move(g_cur)),
      d_gram_(std::move(d_gram)) {
  const Index p = g_cur_.rows();
  if (g_prev_.rows() != p || g_prev_.cols() != p || g_cur_.cols() != p ||
      static_cast<Index>(d_gram_.size()) != p || beta0.size() != p) {
    throw InvalidArgument("inconsistent IVP residual dimensions");
  }
  rhs_ = 2.0 * g_prev_ * beta0;
}

Eigen::VectorXd IvpResidual::residual(const Eigen::VectorXd& b) const {
  Eigen::VectorXd phi = rhs_ - 2.0 * g_cur_ * b;
  for (Index i = 0; i < phi.size(); ++i) {
    phi[i] += b.dot(d_gram_[static_cast<std::size_t>(i)] * b);
  }
  return phi;
}

Eigen::MatrixXd IvpResidual::jacobian(const Eigen::VectorXd& b) const {
  Eigen::MatrixXd j = -2.0 * g_cur_;
  for (Index i = 0; i < j.rows(); ++i) {
    const auto& d = d_gram_[static_cast<std::size_t>(i)];
    j.row(i) += ((d + d.transpose()) * b).transpose();
  }
  return j;
}

double IvpResidual::operator()(const Eigen::VectorXd& b,
                               Eigen::VectorXd* grad) const {
  const Eigen::VectorXd phi = residual(b);
  if (grad) *grad = 2.0 * jacobian(b).transpose() * phi;
  return phi.squaredNorm();
}

// ------------------------------------------------------------ mesh paths

ParametrizedPathObjective::ParametrizedPathObjective(const TriangleMesh& q0,
                                                     const TriangleMesh& q1,
                                                     int steps,
                                                     const MetricCoefficients& c)
    : q0_(q0), q1_(q1), steps_(steps), c_(c) {
  check_steps(steps);
  if (!q0.same_topology(q1)) {
    throw TopologyMismatch("geodesic endpoints must share one connectivity");
  }
  c.validate();
}

Index ParametrizedPathObjective::size() const {
  return 3 * q0_.vertex_count() * (steps_ - 1);
}

std::vector<TriangleMesh> ParametrizedPathObjective::path(
    const Eigen::VectorXd& x) const {
  const Index n3 = 3 * q0_.vertex_count();
  std::vector<TriangleMesh> p{q0_};
  for (int t = 1; t < steps_; ++t) {
    p.push_back(q0_.with_vertices(unflatten(x.segment(n3 * (t - 1), n3))));
  }
  p.push_back(q1_);
  return p;
}

Eigen::VectorXd ParametrizedPathObjective::linear_initialization() const {
  const Index n3 = 3 * q0_.vertex_count();
  Eigen::VectorXd x(size());
  for (int t = 1; t < steps_; ++t) {
    const double s = static_cast<double>(t) / steps_;
    x.segment(n3 * (t - 1), n3) =
        (1.0 - s) * flatten(q0_.vertices()) + s * flatten(q1_.vertices());
  }
  return x;
}

double ParametrizedPathObjective::operator()(const Eigen::VectorXd& x,
                                             Eigen::VectorXd* grad) const {
  const auto knots = path(x);
  if (!grad) return path_energy(knots, c_);
  const auto e = path_energy_gradient(knots, c_);
  const Index n3 = 3 * q0_.vertex_count();
  grad->resize(x.size());
  for (int t = 1; t < steps_; ++t) {
    grad->segment(n3 * (t - 1), n3) = flatten(e.gradient[static_cast<std::size_t>(t)]);
  }
  return e.value;
}

}  // namespace lshape
