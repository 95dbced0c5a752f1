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

// Objective functions behind the solvers, exposed so their gradients can be
// checked independently of the optimizer.

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "lshape/latent.hpp"
#include "lshape/metric.hpp"
#include "lshape/optimize.hpp"
#include "lshape/varifold.hpp"

namespace lshape {

/// Stacks knots into one vector and back.
Eigen::VectorXd stack_codes(const LatentPath& codes, std::size_t first,
                            std::size_t count);
LatentPath unstack_codes(const Eigen::VectorXd& x, Index dim);

/// Gamma(decode(alpha(1)), target) + (1 / lambda) E(alpha) over the knots
/// alpha(1/T) .. alpha(1), with alpha(0) = 0.
class RetrievalObjective {
 public:
  RetrievalObjective(const LatentBasis& basis, const TriangleMesh& target,
                     double sigma, double lambda, int steps,
                     const MetricCoefficients& c);

  double operator()(const Eigen::VectorXd& x, Eigen::VectorXd* grad) const;
  Index size() const;
  LatentPath path(const Eigen::VectorXd& x) const;
  Eigen::VectorXd variables(const LatentPath& path) const;
  /// Varifold term alone at the final knot of x.
  double discrepancy(const Eigen::VectorXd& x) const;

 private:
  const LatentBasis& basis_;
  VarifoldTarget target_;
  double lambda_;
  int steps_;
  MetricCoefficients c_;
};

/// Latent path energy over the interior knots with both endpoints fixed.
class BvpObjective {
 public:
  BvpObjective(const LatentBasis& basis, LatentCode alpha0, LatentCode alpha1,
               int steps, const MetricCoefficients& c);

  double operator()(const Eigen::VectorXd& x, Eigen::VectorXd* grad) const;
  Index size() const;
  LatentPath path(const Eigen::VectorXd& x) const;
  Eigen::VectorXd variables(const LatentPath& path) const;

 private:
  const LatentBasis& basis_;
  LatentCode alpha0_, alpha1_;
  int steps_;
  MetricCoefficients c_;
};

/// E(alpha) + lambda Gamma(decode(alpha(0)), q0) + lambda Gamma(decode(alpha(1)), q1)
/// over all T + 1 knots.
class RelaxedObjective {
 public:
  RelaxedObjective(const LatentBasis& basis, const TriangleMesh& q0,
                   const TriangleMesh& q1, double sigma, double lambda,
                   int steps, const MetricCoefficients& c);

  double operator()(const Eigen::VectorXd& x, Eigen::VectorXd* grad) const;
  Index size() const;
  LatentPath path(const Eigen::VectorXd& x) const;
  Eigen::VectorXd variables(const LatentPath& path) const;
  /// (Gamma at alpha(0), Gamma at alpha(1)).
  std::pair<double, double> discrepancies(const Eigen::VectorXd& x) const;

 private:
  const LatentBasis& basis_;
  VarifoldTarget target0_, target1_;
  double lambda_;
  int steps_;
  MetricCoefficients c_;
};

/// Residual of one discrete geodesic step,
///   Phi_i(b) = 2 (G_prev beta0)_i - 2 (G_cur b)_i + b^T D_i b,
/// where D_i is the derivative of the Gram matrix at the current knot along
/// the i-th coordinate. The objective value is |Phi|^2.
class IvpResidual {
 public:
  /// Precomputes G_prev, G_cur and the P derivative matrices.
  IvpResidual(const LatentBasis& basis, const LatentCode& alpha_prev,
              const LatentCode& alpha_cur, const MetricCoefficients& c,
              std::optional<double> fd_step = {});

  /// Direct construction from the assembled pieces.
  IvpResidual(Eigen::MatrixXd g_prev, Eigen::MatrixXd g_cur,
              std::vector<Eigen::MatrixXd> d_gram, Eigen::VectorXd beta0);

  Eigen::VectorXd residual(const Eigen::VectorXd& b) const;
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& b) const;
  double operator()(const Eigen::VectorXd& b, Eigen::VectorXd* grad) const;
  Index size() const { return g_cur_.rows(); }

 private:
  Eigen::MatrixXd g_prev_, g_cur_;
  std::vector<Eigen::MatrixXd> d_gram_;
  Eigen::VectorXd rhs_;  // 2 G_prev beta0
};

/// Mesh path energy over the interior knots, endpoints fixed.
class ParametrizedPathObjective {
 public:
  ParametrizedPathObjective(const TriangleMesh& q0, const TriangleMesh& q1,
                            int steps, const MetricCoefficients& c);

  double operator()(const Eigen::VectorXd& x, Eigen::VectorXd* grad) const;
  Index size() const;
  std::vector<TriangleMesh> path(const Eigen::VectorXd& x) const;
  Eigen::VectorXd linear_initialization() const;

 private:
  TriangleMesh q0_, q1_;
  int steps_;
  MetricCoefficients c_;
};

}  // namespace lshape
