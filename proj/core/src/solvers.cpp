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

#include "lshape/solvers.hpp"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>

#include "lshape/error.hpp"
#include "lshape/objectives.hpp"

namespace lshape {

namespace {

template <class Obj>
OptimizeResult run_stage(const Obj& obj, Eigen::VectorXd x,
                         const OptimizerConfig& cfg) {
  return minimize([&obj](const Eigen::VectorXd& v, Eigen::VectorXd* g) { return obj(v, g); },
                  std::move(x), cfg);
}

void record(SolveReport& report, const OptimizeResult& r) {
  report.objective = r.value;
  report.gradient_norm = r.gradient_norm;
  report.reason = r.reason;
  report.stage_iterations.push_back(r.iterations);
}

}  // namespace

MultiscaleSchedule MultiscaleSchedule::bodies() {
  return {{{0.4, 1e2}, {0.2, 1e4}, {0.1, 1e6}, {0.05, 1e7}, {0.025, 1e8}}};
}

MultiscaleSchedule MultiscaleSchedule::faces() {
  return {{{0.01, 1e6}, {0.005, 1e10}}};
}

void MultiscaleSchedule::validate() const {
  if (stages.empty()) throw InvalidArgument("multiscale schedule is empty");
  for (std::size_t i = 0; i < stages.size(); ++i) {
    const Stage& s = stages[i];
    if (!(s.sigma > 0 && std::isfinite(s.sigma)) ||
        !(s.lambda > 0 && std::isfinite(s.lambda))) {
      throw InvalidArgument("schedule sigma and lambda must be positive");
    }
    if (i > 0 && (s.sigma > stages[i - 1].sigma || s.lambda < stages[i - 1].lambda)) {
      throw InvalidArgument(
          "schedule sigmas must be nonincreasing and lambdas nondecreasing");
    }
  }
}

LatentSolution retrieve_latent(const LatentBasis& basis,
                               const TriangleMesh& target,
                               const MetricCoefficients& c,
                               const MultiscaleSchedule& schedule, int steps,
                               const OptimizerConfig& cfg) {
  schedule.validate();
  LatentSolution out;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(basis.dimension() * steps);
  for (const auto& stage : schedule.stages) {
    const RetrievalObjective obj(basis, target, stage.sigma, stage.lambda, steps, c);
    OptimizeResult r = run_stage(obj, std::move(x), cfg);
    record(out.report, r);
    x = std::move(r.x);
    if (&stage == &schedule.stages.back()) {
      out.path = obj.path(x);
      out.report.discrepancies = {obj.discrepancy(x)};
    }
  }
  out.report.energy = latent_path_energy(basis, out.path, c);
  return out;
}

LatentSolution geodesic_bvp(const LatentBasis& basis, const LatentCode& alpha0,
                            const LatentCode& alpha1, int steps,
                            const MetricCoefficients& c,
                            const OptimizerConfig& cfg) {
  const BvpObjective obj(basis, alpha0, alpha1, steps, c);
  LatentPath init;
  for (int t = 0; t <= steps; ++t) {
    const double s = static_cast<double>(t) / steps;
    init.push_back((1.0 - s) * alpha0 + s * alpha1);
  }
  LatentSolution out;
  if (steps == 1) {
    out.path = init;
    out.report.objective = latent_path_energy(basis, init, c);
    out.report.reason = Termination::converged;
    out.report.stage_iterations = {0};
  } else {
    OptimizeResult r = run_stage(obj, obj.variables(init), cfg);
    record(out.report, r);
    out.path = obj.path(r.x);
  }
  out.report.energy = out.report.objective;
  return out;
}

LatentSolution relaxed_geodesic(const LatentBasis& basis,
                                const TriangleMesh& q0, const TriangleMesh& q1,
                                int steps, const MetricCoefficients& c,
                                const MultiscaleSchedule& schedule,
                                const OptimizerConfig& cfg) {
  schedule.validate();
  LatentSolution out;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(basis.dimension() * (steps + 1));
  for (const auto& stage : schedule.stages) {
    const RelaxedObjective obj(basis, q0, q1, stage.sigma, stage.lambda, steps, c);
    OptimizeResult r = run_stage(obj, std::move(x), cfg);
    record(out.report, r);
    x = std::move(r.x);
    if (&stage == &schedule.stages.back()) {
      out.path = obj.path(x);
      const auto [g0, g1] = obj.discrepancies(x);
      out.report.discrepancies = {g0, g1};
    }
  }
  out.report.energy = latent_path_energy(basis, out.path, c);
  return out;
}

LatentPath geodesic_ivp(const LatentBasis& basis, const LatentCode& alpha0,
                        const Eigen::VectorXd& beta, int steps,
                        const MetricCoefficients& c, const IvpConfig& cfg) {
  const Index p = basis.dimension();
  if (steps < 2) throw InvalidArgument("geodesic shooting needs N >= 2");
  if (alpha0.size() != p || beta.size() != p) {
    throw InvalidArgument("code or velocity length does not match basis");
  }
  const double tol = cfg.tolerance * static_cast<double>(p);
  LatentPath path{alpha0, alpha0 + beta / static_cast<double>(steps)};
  try {
    basis.decode(alpha0);
  } catch (const DegenerateFaceError& e) {
    throw NumericalFailure(std::string("start code decodes to a degenerate mesh: ") + e.what(), 0);
  }
  for (int k = 1; k < steps; ++k) {
    const LatentCode& prev = path[static_cast<std::size_t>(k - 1)];
    const LatentCode& cur = path[static_cast<std::size_t>(k)];
    const Eigen::VectorXd beta0 = cur - prev;
    Eigen::VectorXd b = beta0;
    try {
      const IvpResidual res(basis, prev, cur, c, cfg.fd_step);
      Eigen::VectorXd phi = res.residual(b);
      double norm = phi.norm();
      double mu = -1.0;
      int it = 0;
      while (norm >= tol) {
        if (++it > cfg.max_iterations) break;
        const Eigen::MatrixXd j = res.jacobian(b);
        const Eigen::MatrixXd jtj = j.transpose() * j;
        const Eigen::VectorXd jtf = j.transpose() * phi;
        if (mu < 0) mu = 1e-12 * std::max(1e-300, jtj.diagonal().maxCoeff());
        bool improved = false;
        for (int tries = 0; tries < 40 && !improved; ++tries) {
          Eigen::MatrixXd a = jtj;
          a.diagonal().array() += mu;
          const Eigen::VectorXd delta = a.ldlt().solve(-jtf);
          const Eigen::VectorXd cand = b + delta;
          const Eigen::VectorXd phi_c = res.residual(cand);
          const double n_c = phi_c.norm();
          if (std::isfinite(n_c) && n_c < norm) {
            b = cand;
            phi = phi_c;
            norm = n_c;
            mu = std::max(mu / 10.0, 1e-300);
            improved = true;
          } else {
            mu *= 10.0;
          }
        }
        if (!improved) break;
      }
      if (!(norm < tol)) {
        throw NumericalFailure("geodesic step " + std::to_string(k + 1) +
                                   ": residual " + std::to_string(norm) +
                                   " above tolerance",
                               k + 1);
      }
      path.push_back(cur + b);
    } catch (const DegenerateFaceError& e) {
      throw NumericalFailure("geodesic step " + std::to_string(k + 1) +
                                 ": " + e.what(),
                             k + 1);
    }
  }
  try {
    basis.decode(path.back());
  } catch (const DegenerateFaceError& e) {
    throw NumericalFailure("geodesic step " + std::to_string(steps) + ": " + e.what(), steps);
  }
  return path;
}

MeshPathSolution parametrized_geodesic(const TriangleMesh& q0,
                                       const TriangleMesh& q1, int steps,
                                       const MetricCoefficients& c,
                                       const OptimizerConfig& cfg) {
  const ParametrizedPathObjective obj(q0, q1, steps, c);
  MeshPathSolution out;
  if (steps == 1) {
    out.path = {q0, q1};
    out.report.objective = path_energy(out.path, c);
    out.report.reason = Termination::converged;
    out.report.stage_iterations = {0};
  } else {
    OptimizeResult r = run_stage(obj, obj.linear_initialization(), cfg);
    record(out.report, r);
    out.path = obj.path(r.x);
  }
  out.report.energy = out.report.objective;
  return out;
}

}  // namespace lshape
