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

#include <cmath>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "lshape/error.hpp"
#include "lshape/objectives.hpp"
#include "lshape/shapes.hpp"
#include "lshape/solvers.hpp"

namespace {

using namespace lshape;
namespace lt = lshape::testing;
using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Toy {
  TriangleMesh tmpl = lt::jittered_sphere(6, 8, 0.1, 1);
  LatentBasis basis = lt::smooth_basis(tmpl, 4, 2, 0.1, 2);
  MetricCoefficients c = MetricCoefficients::bodies();
};

TEST(MultiscaleSchedule, Presets) {
  const auto b = MultiscaleSchedule::bodies();
  ASSERT_EQ(b.stages.size(), 5u);
  const double sig[] = {0.4, 0.2, 0.1, 0.05, 0.025};
  const double lam[] = {1e2, 1e4, 1e6, 1e7, 1e8};
  for (int i = 0; i < 5; ++i) {
    EXPECT_EQ(b.stages[i].sigma, sig[i]);
    EXPECT_EQ(b.stages[i].lambda, lam[i]);
  }
  const auto f = MultiscaleSchedule::faces();
  ASSERT_EQ(f.stages.size(), 2u);
  EXPECT_EQ(f.stages[0].sigma, 0.01);
  EXPECT_EQ(f.stages[0].lambda, 1e6);
  EXPECT_EQ(f.stages[1].sigma, 0.005);
  EXPECT_EQ(f.stages[1].lambda, 1e10);
  EXPECT_NO_THROW(b.validate());
  EXPECT_THROW(MultiscaleSchedule{}.validate(), InvalidArgument);
  EXPECT_THROW((MultiscaleSchedule{{{0.1, 1}, {0.2, 10}}}.validate()), InvalidArgument);
  EXPECT_THROW((MultiscaleSchedule{{{0.2, 10}, {0.1, 1}}}.validate()), InvalidArgument);
}

// ---------------------------------------------------------------- objective gradients

TEST(Objectives, GradientsMatchFiniteDifferences) {
  const Toy s;
  const TriangleMesh target = s.basis.decode(lt::random_vector(4, 3, 0.5));
  const TriangleMesh other = s.basis.decode(lt::random_vector(4, 4, 0.5));
  const int T = 3;
  const VectorXd x = lt::random_vector(4 * T, 5, 0.3);
  auto check = [](const Objective& f, const VectorXd& at) {
    VectorXd g;
    f(at, &g);
    EXPECT_LT(lt::relative_error(g, lt::central_difference([&](const VectorXd& y) { return f(y, nullptr); }, at)),
              1e-6);
  };
  const RetrievalObjective ret(s.basis, target, 0.2, 1e3, T, s.c);
  EXPECT_EQ(ret.size(), 4 * T);
  check(std::cref(ret), x);
  const BvpObjective bvp(s.basis, VectorXd::Zero(4), lt::random_vector(4, 6, 0.5), T, s.c);
  EXPECT_EQ(bvp.size(), 4 * (T - 1));
  check(std::cref(bvp), x.head(4 * (T - 1)));
  const RelaxedObjective rel(s.basis, target, other, 0.2, 1e3, T, s.c);
  EXPECT_EQ(rel.size(), 4 * (T + 1));
  check(std::cref(rel), lt::random_vector(4 * (T + 1), 7, 0.3));
  const TriangleMesh q0 = s.tmpl;
  const TriangleMesh q1 = s.basis.decode(lt::random_vector(4, 8, 0.5));
  const ParametrizedPathObjective par(q0, q1, T, s.c);
  EXPECT_EQ(par.size(), 3 * s.tmpl.vertex_count() * (T - 1));
  check(std::cref(par), par.linear_initialization() + lt::random_vector(par.size(), 9, 1e-3));
}

TEST(Objectives, StackingRoundTrip) {
  LatentPath p;
  for (int k = 0; k < 4; ++k) p.push_back(lt::random_vector(3, 10 + k));
  const VectorXd x = stack_codes(p, 1, 2);
  ASSERT_EQ(x.size(), 6);
  const LatentPath back = unstack_codes(x, 3);
  EXPECT_EQ(back[0], p[1]);
  EXPECT_EQ(back[1], p[2]);
}

TEST(IvpResidual, JacobianMatchesFiniteDifferences) {
  const Toy s;
  const VectorXd a0 = lt::random_vector(4, 11, 0.3), a1 = a0 + lt::random_vector(4, 12, 0.05);
  const IvpResidual r(s.basis, a0, a1, s.c);
  const VectorXd b = lt::random_vector(4, 13, 0.05);
  const MatrixXd J = r.jacobian(b);
  for (Index i = 0; i < 4; ++i) {
    VectorXd e = VectorXd::Zero(4);
    e[i] = 1e-6;
    const VectorXd fd = (r.residual(b + e) - r.residual(b - e)) / 2e-6;
    EXPECT_LT((J.col(i) - fd).cwiseAbs().maxCoeff(), 1e-6 * (1 + fd.cwiseAbs().maxCoeff()));
  }
  VectorXd g;
  const double v = r(b, &g);
  EXPECT_NEAR(v, r.residual(b).squaredNorm(), 1e-14 * (1 + v));
  EXPECT_LT((g - 2.0 * J.transpose() * r.residual(b)).cwiseAbs().maxCoeff(), 1e-10 * (1 + g.norm()));
}

TEST(IvpResidual, ZeroForConstantMetric) {
  // G constant and no derivative: Phi(b) = 2 G (beta0 - b) vanishes at b = beta0
  const MatrixXd G = MatrixXd::Identity(2, 2) * 3.0;
  const VectorXd beta0 = Eigen::Vector2d(0.5, -1);
  const IvpResidual r(G, G, {MatrixXd::Zero(2, 2), MatrixXd::Zero(2, 2)}, beta0);
  EXPECT_EQ(r.residual(beta0), VectorXd::Zero(2));
}

// ---------------------------------------------------------------- solvers

TEST(RetrieveLatent, RecoversCodeOfDecodedTarget) {
  const Toy s;
  const VectorXd truth = lt::random_vector(4, 14, 0.8);
  const TriangleMesh target = s.basis.decode(truth);
  OptimizerConfig cfg;
  cfg.max_iterations = 300;
  const LatentSolution sol = retrieve_latent(s.basis, target, s.c, MultiscaleSchedule::bodies(), 3, cfg);
  ASSERT_EQ(sol.path.size(), 4u);
  EXPECT_EQ(sol.path.front(), VectorXd::Zero(4));
  EXPECT_LT((sol.path.back() - truth).norm() / truth.norm(), 1e-4);
  EXPECT_EQ(sol.report.stage_iterations.size(), 5u);
  ASSERT_EQ(sol.report.discrepancies.size(), 1u);
  EXPECT_GE(sol.report.discrepancies[0], 0.0);
  EXPECT_GT(sol.report.energy, 0.0);
}

TEST(RetrieveLatent, PermutedTargetGivesSameObjective) {
  const Toy s;
  const TriangleMesh target = s.basis.decode(lt::random_vector(4, 15, 0.5));
  const TriangleMesh permuted = shapes::permute_vertices(target, 16);
  OptimizerConfig cfg;
  cfg.max_iterations = 100;
  const auto sched = MultiscaleSchedule{{{0.2, 1e4}}};
  const auto a = retrieve_latent(s.basis, target, s.c, sched, 2, cfg);
  const auto b = retrieve_latent(s.basis, permuted, s.c, sched, 2, cfg);
  EXPECT_NEAR(a.report.objective, b.report.objective, 1e-8 * (a.report.objective + 1e-12));
  EXPECT_LT((a.path.back() - b.path.back()).norm(), 1e-6);
}

TEST(GeodesicBvp, TranslationBasisGivesStraightLine) {
  const TriangleMesh t = lt::jittered_sphere(6, 8, 0.1, 17);
  const LatentBasis b = lt::translation_basis(t);
  const VectorXd a0 = lt::random_vector(3, 18), a1 = lt::random_vector(3, 19);
  const int T = 5;
  const LatentSolution sol = geodesic_bvp(b, a0, a1, T, MetricCoefficients::bodies());
  ASSERT_EQ(sol.path.size(), static_cast<std::size_t>(T + 1));
  EXPECT_EQ(sol.path.front(), a0);
  EXPECT_EQ(sol.path.back(), a1);
  for (int k = 0; k <= T; ++k) {
    EXPECT_LT((sol.path[k] - (a0 + (a1 - a0) * k / double(T))).norm(), 1e-8);
  }
  EXPECT_NEAR(sol.report.energy, (a1 - a0).squaredNorm() * face_areas(t).sum(), 1e-8);
}

TEST(GeodesicBvp, EndpointSwapReversesPathAndKeepsEnergy) {
  const Toy s;
  const VectorXd a0 = lt::random_vector(4, 20, 0.5), a1 = lt::random_vector(4, 21, 0.5);
  const int T = 4;
  const auto fwd = geodesic_bvp(s.basis, a0, a1, T, s.c);
  const auto bwd = geodesic_bvp(s.basis, a1, a0, T, s.c);
  // the discrete energy uses left knots, so reversal is only first-order exact
  EXPECT_NEAR(fwd.report.energy, bwd.report.energy, 0.05 * fwd.report.energy);
  for (int k = 0; k <= T; ++k) EXPECT_LT((fwd.path[k] - bwd.path[T - k]).norm(), 0.05 * (a1 - a0).norm());
  // a geodesic beats the straight line
  LatentPath line;
  for (int k = 0; k <= T; ++k) line.push_back(a0 + (a1 - a0) * k / double(T));
  EXPECT_LE(fwd.report.energy, latent_path_energy(s.basis, line, s.c) * (1 + 1e-12));
}

TEST(GeodesicIvp, ResidualVanishesAtEveryStep) {
  const Toy s;
  const VectorXd a0 = lt::random_vector(4, 22, 0.3), beta = lt::random_vector(4, 23, 0.5);
  const int N = 6;
  IvpConfig cfg;
  const LatentPath path = geodesic_ivp(s.basis, a0, beta, N, s.c, cfg);
  ASSERT_EQ(path.size(), static_cast<std::size_t>(N + 1));
  EXPECT_EQ(path[0], a0);
  EXPECT_LT((path[1] - (a0 + beta / N)).norm(), 1e-15);
  for (int k = 1; k < N; ++k) {
    const IvpResidual r(s.basis, path[k - 1], path[k], s.c, cfg.fd_step);
    EXPECT_LT(r.residual(path[k + 1] - path[k]).norm(), cfg.tolerance * 4) << k;
  }
}

TEST(GeodesicIvp, TranslationBasisIsLinear) {
  const TriangleMesh t = lt::jittered_sphere(6, 8, 0.1, 24);
  const LatentBasis b = lt::translation_basis(t);
  const VectorXd a0 = lt::random_vector(3, 25), beta = lt::random_vector(3, 26);
  const LatentPath path = geodesic_ivp(b, a0, beta, 5, MetricCoefficients::bodies());
  for (int k = 0; k <= 5; ++k) EXPECT_LT((path[k] - (a0 + beta * k / 5.0)).norm(), 1e-10);
}

TEST(GeodesicIvp, ConsistentWithBvp) {
  const Toy s;
  const VectorXd a0 = lt::random_vector(4, 27, 0.3), beta = lt::random_vector(4, 28, 0.4);
  const int N = 5;
  const LatentPath shot = geodesic_ivp(s.basis, a0, beta, N, s.c);
  OptimizerConfig cfg;
  cfg.gradient_tolerance = 1e-12;
  cfg.max_iterations = 1000;
  const auto bvp = geodesic_bvp(s.basis, a0, shot.back(), N, s.c, cfg);
  for (int k = 1; k < N; ++k) EXPECT_LT((bvp.path[k] - shot[k]).norm(), 1e-5 * beta.norm()) << k;
}

TEST(GeodesicIvp, Errors) {
  const Toy s;
  EXPECT_THROW(geodesic_ivp(s.basis, VectorXd::Zero(4), VectorXd::Zero(4), 1, s.c), InvalidArgument);
  EXPECT_THROW(geodesic_ivp(s.basis, VectorXd::Zero(3), VectorXd::Zero(4), 3, s.c), InvalidArgument);
  // a velocity that collapses the template raises a step-tagged failure
  MatrixXd fields(3 * s.tmpl.vertex_count(), 1);
  fields.col(0) = -flatten(s.tmpl.vertices());
  const LatentBasis shrink(s.tmpl, fields, 1);
  try {
    geodesic_ivp(shrink, VectorXd::Zero(1), VectorXd::Constant(1, 3.0), 3, s.c);
    FAIL();
  } catch (const NumericalFailure& e) {
    EXPECT_GE(e.step(), 1u);
  }
}

TEST(RelaxedGeodesic, MatchesEndpointsAndInterpolates) {
  const Toy s;
  const VectorXd a0 = lt::random_vector(4, 29, 0.5), a1 = lt::random_vector(4, 30, 0.5);
  OptimizerConfig cfg;
  cfg.max_iterations = 300;
  const auto sol = relaxed_geodesic(s.basis, s.basis.decode(a0), s.basis.decode(a1), 3, s.c,
                                    MultiscaleSchedule::bodies(), cfg);
  ASSERT_EQ(sol.path.size(), 4u);
  EXPECT_LT((sol.path.front() - a0).norm(), 1e-4 * a0.norm());
  EXPECT_LT((sol.path.back() - a1).norm(), 1e-4 * a1.norm());
  ASSERT_EQ(sol.report.discrepancies.size(), 2u);
  // the interior agrees with the fixed-endpoint geodesic
  const auto bvp = geodesic_bvp(s.basis, a0, a1, 3, s.c);
  for (int k = 1; k < 3; ++k) EXPECT_LT((sol.path[k] - bvp.path[k]).norm(), 1e-3 * (a1 - a0).norm());
}

TEST(ParametrizedGeodesic, TranslationAndBound) {
  const TriangleMesh q0 = lt::jittered_sphere(5, 6, 0.1, 31);
  const auto c = MetricCoefficients::bodies();
  const Vec3 t(0.3, -0.1, 0.2);
  const auto moved = parametrized_geodesic(q0, shapes::transform(q0, Eigen::Matrix3d::Identity(), t), 3, c);
  ASSERT_EQ(moved.path.size(), 4u);
  // areas are taken at the left knot, so the discrete optimum may shrink the
  // interior knots slightly below the straight line's energy
  const double linear = t.squaredNorm() * face_areas(q0).sum();
  EXPECT_LE(moved.report.energy, linear * (1 + 1e-12));
  EXPECT_NEAR(moved.report.energy, linear, 1e-5 * linear);
  const TriangleMesh q1 = shapes::bend(shapes::scale_axes(q0, Vec3(1.2, 1, 0.9)), 0.6);
  const auto sol = parametrized_geodesic(q0, q1, 3, c);
  EXPECT_EQ(sol.path.front().vertices(), q0.vertices());
  EXPECT_EQ(sol.path.back().vertices(), q1.vertices());
  const ParametrizedPathObjective obj(q0, q1, 3, c);
  EXPECT_LE(sol.report.energy, obj(obj.linear_initialization(), nullptr) * (1 + 1e-12));
  EXPECT_THROW(parametrized_geodesic(q0, shapes::icosphere(1), 3, c), TopologyMismatch);
}

}  // namespace
