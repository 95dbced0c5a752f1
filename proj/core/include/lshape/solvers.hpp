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
#include <vector>

#include "lshape/latent.hpp"
#include "lshape/metric.hpp"
#include "lshape/optimize.hpp"

namespace lshape {

/// Coarse-to-fine varifold continuation: sigma shrinks while lambda grows.
struct MultiscaleSchedule {
  struct Stage {
    double sigma = 0.1;
    double lambda = 1.0;
  };
  std::vector<Stage> stages;

  /// sigma {.4, .2, .1, .05, .025} with lambda {1e2, 1e4, 1e6, 1e7, 1e8}.
  static MultiscaleSchedule bodies();
  /// (sigma, lambda) = (.01, 1e6), (.005, 1e10).
  static MultiscaleSchedule faces();

  /// Nonempty, sigmas positive and nonincreasing, lambdas positive and
  /// nondecreasing.
  void validate() const;
};

struct SolveReport {
  double objective = 0.0;
  std::vector<int> stage_iterations;
  double gradient_norm = 0.0;
  Termination reason = Termination::max_iterations;
  /// Latent path energy of the returned path.
  double energy = 0.0;
  /// Varifold discrepancies at the final stage (one for retrieval, two for
  /// the relaxed problem, none otherwise).
  std::vector<double> discrepancies;
};

struct LatentSolution {
  LatentPath path;
  SolveReport report;
};

/// Latent code of a target mesh: minimizes Gamma(decode(alpha(1)), target)
/// + (1/lambda) E over alpha(1/T) .. alpha(1) with alpha(0) = 0, stage by
/// stage, starting from the zero path.
LatentSolution retrieve_latent(const LatentBasis& basis,
                               const TriangleMesh& target,
                               const MetricCoefficients& c,
                               const MultiscaleSchedule& schedule, int steps,
                               const OptimizerConfig& cfg = {});

/// Geodesic between two codes; interior knots start on the straight line.
LatentSolution geodesic_bvp(const LatentBasis& basis, const LatentCode& alpha0,
                            const LatentCode& alpha1, int steps,
                            const MetricCoefficients& c,
                            const OptimizerConfig& cfg = {});

/// Joint endpoint matching and geodesic: minimizes E + lambda Gamma0 +
/// lambda Gamma1 over all knots, starting from the zero path.
LatentSolution relaxed_geodesic(const LatentBasis& basis,
                                const TriangleMesh& q0, const TriangleMesh& q1,
                                int steps, const MetricCoefficients& c,
                                const MultiscaleSchedule& schedule,
                                const OptimizerConfig& cfg = {});

struct IvpConfig {
  /// Accept a step once |Phi| < tolerance * P.
  double tolerance = 1e-8;
  int max_iterations = 100;
  /// Gram derivative step; default 1e-5 (1 + |alpha|).
  std::optional<double> fd_step;
};

/// Discrete geodesic shooting: alpha^1 = alpha^0 + beta / N, then each knot
/// solves Phi = 0 by damped Gauss-Newton from the linear extrapolation.
/// Throws NumericalFailure carrying the failing step index.
LatentPath geodesic_ivp(const LatentBasis& basis, const LatentCode& alpha0,
                        const Eigen::VectorXd& beta, int steps,
                        const MetricCoefficients& c, const IvpConfig& cfg = {});

struct MeshPathSolution {
  std::vector<TriangleMesh> path;
  SolveReport report;
};

/// Same-topology geodesic in mesh space: minimizes the mesh path energy over
/// the interior vertex positions, starting from the linear path.
MeshPathSolution parametrized_geodesic(const TriangleMesh& q0,
                                       const TriangleMesh& q1, int steps,
                                       const MetricCoefficients& c,
                                       const OptimizerConfig& cfg = {});

}  // namespace lshape
