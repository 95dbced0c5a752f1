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
#include <sstream>

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "fixtures.hpp"
#include "lshape/basis_io.hpp"
#include "lshape/error.hpp"
#include "lshape/latent.hpp"
#include "lshape/shapes.hpp"

namespace {

using namespace lshape;
namespace lt = lshape::testing;
using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST(LatentBasis, DecodeIsAffineAndMatchesDenseProduct) {
  const TriangleMesh t = lt::jittered_sphere(6, 8, 0.1, 1);
  const LatentBasis b = lt::smooth_basis(t, 5, 2);
  EXPECT_EQ(b.template_mesh().vertices(), t.vertices());
  EXPECT_EQ(b.decode_vertices(VectorXd::Zero(5)), t.vertices());
  const VectorXd x = lt::random_vector(5, 3), y = lt::random_vector(5, 4);
  const VectorXd dense = flatten(t.vertices()) + b.fields() * x;
  EXPECT_LT((flatten(b.decode_vertices(x)) - dense).cwiseAbs().maxCoeff(), 1e-14);
  const double s = 0.3;
  const VertexMatrix lhs = b.decode_vertices(s * x + (1 - s) * y);
  const VertexMatrix rhs = s * b.decode_vertices(x) + (1 - s) * b.decode_vertices(y);
  EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_EQ(decode(b, x).vertices(), b.decode_vertices(x));
}

TEST(LatentBasis, ExpandAndProjectAreAdjoint) {
  const TriangleMesh t = lt::jittered_sphere(6, 8, 0.1, 5);
  const LatentBasis b = lt::smooth_basis(t, 4, 6);
  const VectorXd beta = lt::random_vector(4, 7);
  const VertexField g = lt::random_field(t.vertex_count(), 8);
  EXPECT_NEAR(flatten(b.expand(beta)).dot(flatten(g)), beta.dot(b.project(g)), 1e-12);
  EXPECT_EQ(flatten(b.field(2)), b.fields().col(2));
}

TEST(LatentBasis, RejectsBadInput) {
  const TriangleMesh t = shapes::icosphere(1);
  const Index n3 = 3 * t.vertex_count();
  MatrixXd dependent = MatrixXd::Random(n3, 3);
  dependent.col(2) = 2.0 * dependent.col(0) - dependent.col(1);
  EXPECT_THROW(LatentBasis(t, dependent, 1), InvalidArgument);
  EXPECT_THROW(LatentBasis(t, MatrixXd::Random(n3 + 3, 2), 1), InvalidArgument);
  EXPECT_THROW(LatentBasis(t, MatrixXd::Random(n3, 2), 3), InvalidArgument);
  const LatentBasis b(t, MatrixXd::Random(n3, 2), 1);
  EXPECT_EQ(b.shape_count(), 1);
  EXPECT_EQ(b.pose_count(), 1);
  EXPECT_THROW(b.decode(VectorXd::Zero(3)), InvalidArgument);
}

TEST(LatentBasis, DecodeCollapsingFaceThrows) {
  const TriangleMesh t = shapes::icosphere(1);
  // h = -q collapses everything to the origin at alpha = 1
  MatrixXd fields(3 * t.vertex_count(), 1);
  fields.col(0) = -flatten(t.vertices());
  const LatentBasis b(t, fields, 1);
  EXPECT_THROW(b.decode(VectorXd::Ones(1)), DegenerateFaceError);
}

TEST(Gram, SingleFieldEqualsInnerProduct) {
  const TriangleMesh t = lt::jittered_sphere(6, 8, 0.1, 9);
  const VertexField h = lt::random_field(t.vertex_count(), 10, 0.05);
  const LatentBasis b(t, std::vector<VertexField>{h}, 1);
  const auto c = MetricCoefficients::bodies();
  const VectorXd alpha = VectorXd::Constant(1, 0.7);
  const MatrixXd G = gram(b, alpha, c);
  ASSERT_EQ(G.rows(), 1);
  const double expect = h2_inner(b.decode(alpha), h, h, c);
  EXPECT_NEAR(G(0, 0), expect, 1e-12 * expect);
}

TEST(Gram, TranslationBasisIsConstant) {
  const TriangleMesh t = lt::jittered_sphere(6, 8, 0.1, 11);
  const LatentBasis b = lt::translation_basis(t);
  const auto c = MetricCoefficients::bodies();
  const double area = face_areas(t).sum();
  for (int s = 0; s < 5; ++s) {
    const MatrixXd G = gram(b, lt::random_vector(3, 12 + s), c);
    EXPECT_LT((G - area * MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-10 * area);
  }
}

TEST(Gram, SymmetricPositiveDefinite) {
  const TriangleMesh t = lt::jittered_sphere(7, 9, 0.1, 13);
  const LatentBasis b = lt::smooth_basis(t, 8, 14);
  for (int s = 0; s < 5; ++s) {
    const MatrixXd G = gram(b, lt::random_vector(8, 20 + s, 0.5), MetricCoefficients::bodies());
    EXPECT_EQ(G, G.transpose());
    EXPECT_GT(Eigen::SelfAdjointEigenSolver<MatrixXd>(G).eigenvalues().minCoeff(), 0.0);
  }
}

TEST(LatentPathEnergy, TranslationStraightLineClosedForm) {
  const TriangleMesh t = lt::jittered_sphere(6, 8, 0.1, 15);
  const LatentBasis b = lt::translation_basis(t);
  const VectorXd a0 = lt::random_vector(3, 16), a1 = lt::random_vector(3, 17);
  const int T = 6;
  LatentPath path;
  for (int k = 0; k <= T; ++k) path.push_back(a0 + (a1 - a0) * k / static_cast<double>(T));
  const double area = face_areas(t).sum();
  const double expect = (a1 - a0).squaredNorm() * area;
  EXPECT_NEAR(latent_path_energy(b, path, MetricCoefficients::bodies()), expect, 1e-9 * expect);
}

TEST(LatentPathEnergy, EqualsSumOfInnerProductsAtLeftKnots) {
  const TriangleMesh t = lt::jittered_sphere(6, 8, 0.1, 18);
  const LatentBasis b = lt::smooth_basis(t, 6, 19);
  const auto c = MetricCoefficients::faces();
  LatentPath path;
  std::vector<TriangleMesh> meshes;
  for (int k = 0; k < 4; ++k) {
    path.push_back(lt::random_vector(6, 30 + k, 0.5));
    meshes.push_back(b.decode(path.back()));
  }
  double expect = 0;
  for (std::size_t k = 0; k + 1 < meshes.size(); ++k) {
    const VertexField dq = meshes[k + 1].vertices() - meshes[k].vertices();
    expect += h2_inner(meshes[k], dq, dq, c);
  }
  expect *= static_cast<double>(meshes.size() - 1);
  const double e = latent_path_energy(b, path, c);
  EXPECT_NEAR(e, expect, 1e-10 * e);
}

TEST(LatentPathEnergyGradient, MatchesFiniteDifferences) {
  const TriangleMesh t = lt::jittered_sphere(5, 7, 0.1, 21);
  const LatentBasis b = lt::smooth_basis(t, 4, 22);
  const auto c = MetricCoefficients::bodies();
  LatentPath path;
  for (int k = 0; k < 4; ++k) path.push_back(lt::random_vector(4, 40 + k, 0.5));
  const auto g = latent_path_energy_gradient(b, path, c);
  EXPECT_NEAR(g.value, latent_path_energy(b, path, c), 1e-12 * g.value);
  for (std::size_t k = 0; k < path.size(); ++k) {
    auto f = [&](const VectorXd& x) {
      LatentPath p = path;
      p[k] = x;
      return latent_path_energy(b, p, c);
    };
    EXPECT_LT(lt::relative_error(g.gradient[k], lt::central_difference(f, path[k])), 1e-6) << k;
  }
}

TEST(GramDirectionalDerivative, ZeroDirectionAndTranslation) {
  const TriangleMesh t = lt::jittered_sphere(6, 8, 0.1, 23);
  const auto c = MetricCoefficients::bodies();
  const LatentBasis b = lt::smooth_basis(t, 5, 24);
  EXPECT_EQ(gram_directional_derivative(b, lt::random_vector(5, 25), VectorXd::Zero(5), c),
            MatrixXd::Zero(5, 5));
  const LatentBasis tr = lt::translation_basis(t);
  const MatrixXd d = gram_directional_derivative(tr, lt::random_vector(3, 26), lt::random_vector(3, 27), c);
  EXPECT_LT(d.cwiseAbs().maxCoeff(), 1e-6 * face_areas(t).sum());
}

TEST(GramDirectionalDerivative, RichardsonConsistent) {
  const TriangleMesh t = lt::jittered_sphere(6, 8, 0.1, 28);
  const auto c = MetricCoefficients::bodies();
  const LatentBasis b = lt::smooth_basis(t, 5, 29);
  const VectorXd alpha = lt::random_vector(5, 30, 0.5), beta = lt::random_vector(5, 31);
  const MatrixXd d1 = gram_directional_derivative(b, alpha, beta, c, 1e-3);
  const MatrixXd d2 = gram_directional_derivative(b, alpha, beta, c, 5e-4);
  const MatrixXd rich = (4.0 * d2 - d1) / 3.0;
  const MatrixXd def = gram_directional_derivative(b, alpha, beta, c);
  EXPECT_LT((def - rich).cwiseAbs().maxCoeff(), 1e-6 * rich.cwiseAbs().maxCoeff());
  EXPECT_EQ(def, def.transpose());
}

TEST(SubstituteShapeBlock, ReplacesShapeKeepsPose) {
  LatentPath path;
  for (int k = 0; k < 4; ++k) path.push_back(lt::random_vector(6, 50 + k));
  const VectorXd target = lt::random_vector(6, 60);
  const LatentPath out = substitute_shape_block(path, target, 2);
  ASSERT_EQ(out.size(), path.size());
  for (std::size_t k = 0; k < path.size(); ++k) {
    EXPECT_EQ(out[k].head(2), target.head(2));
    EXPECT_EQ(out[k].tail(4), path[k].tail(4));
  }
  // substituting back with the original shape recovers the path
  const LatentPath back = substitute_shape_block(out, path[0], 2);
  EXPECT_EQ(back[0], path[0]);
  EXPECT_THROW(substitute_shape_block(path, VectorXd::Zero(5), 2), InvalidArgument);
  EXPECT_THROW(substitute_shape_block(path, target, 7), InvalidArgument);
}

TEST(BasisIo, RoundTripIsExact) {
  const TriangleMesh t = lt::jittered_sphere(6, 8, 0.1, 61);
  const LatentBasis b = lt::smooth_basis(t, 6, 62, 0.1, 2);
  std::stringstream buf;
  write_basis(b, buf);
  const LatentBasis r = read_basis(buf);
  EXPECT_EQ(r.fields(), b.fields());
  EXPECT_EQ(r.shape_count(), 2);
  EXPECT_EQ(r.template_mesh().vertices(), t.vertices());
  EXPECT_EQ(r.template_mesh().faces(), t.faces());
  const auto dir = lt::temp_dir("basis");
  save_basis(b, dir / "b.bin");
  EXPECT_EQ(load_basis(dir / "b.bin").fields(), b.fields());
  EXPECT_THROW(load_basis(dir / "missing.bin"), ParseError);
  std::stringstream junk("not a basis file at all");
  EXPECT_THROW(read_basis(junk), ParseError);
  std::filesystem::remove_all(dir);
}

}  // namespace
