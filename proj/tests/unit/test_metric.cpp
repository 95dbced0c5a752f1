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
#include <map>
#include <tuple>

#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "fixtures.hpp"
#include "lshape/error.hpp"
#include "lshape/metric.hpp"
#include "lshape/shapes.hpp"

namespace {

using namespace lshape;
namespace lt = lshape::testing;
using Eigen::VectorXd;

// ---------------------------------------------------------------- oracle
// Straight transcription of the six discrete terms with its own geometry:
// Heron areas, acos-based cotangents, and normal variations by central
// differences of the unit normal.

struct OracleTerms {
  double t[6] = {0, 0, 0, 0, 0, 0};
};

Vec3 unit_normal(const Vec3& a, const Vec3& b, const Vec3& c) { return (b - a).cross(c - a).normalized(); }

double heron(const Vec3& a, const Vec3& b, const Vec3& c) {
  const double x = (b - a).norm(), y = (c - b).norm(), z = (a - c).norm();
  const double s = 0.5 * (x + y + z);
  return std::sqrt(s * (s - x) * (s - y) * (s - z));
}

VertexField oracle_laplacian(const TriangleMesh& m, const VertexField& h) {
  VertexField out = VertexField::Zero(h.rows(), 3);
  const auto& V = m.vertices();
  const auto& F = m.faces();
  for (Index f = 0; f < m.face_count(); ++f) {
    for (int k = 0; k < 3; ++k) {
      const int o = F(f, k), i = F(f, (k + 1) % 3), j = F(f, (k + 2) % 3);
      const Vec3 u = V.row(i) - V.row(o), w = V.row(j) - V.row(o);
      const double angle = std::acos(u.dot(w) / (u.norm() * w.norm()));
      const double cot = 1.0 / std::tan(angle);
      // each face contributes the cotangent opposite edge (i, j)
      out.row(i) += cot * (h.row(i) - h.row(j));
      out.row(j) += cot * (h.row(j) - h.row(i));
    }
  }
  return out;
}

OracleTerms oracle(const TriangleMesh& m, const VertexField& h, const VertexField& k,
                   const MetricCoefficients& c) {
  OracleTerms o;
  const auto& V = m.vertices();
  const auto& F = m.faces();
  VectorXd vol = VectorXd::Zero(m.vertex_count());
  for (Index f = 0; f < m.face_count(); ++f) {
    const double a = heron(V.row(F(f, 0)), V.row(F(f, 1)), V.row(F(f, 2)));
    for (int j = 0; j < 3; ++j) vol[F(f, j)] += a / 3.0;
  }
  const VertexField lh = oracle_laplacian(m, h), lk = oracle_laplacian(m, k);
  for (Index i = 0; i < m.vertex_count(); ++i) {
    o.t[0] += c.a0 * h.row(i).dot(k.row(i)) * vol[i];
    o.t[5] += c.a2 * lh.row(i).dot(lk.row(i)) * vol[i];
  }
  const double eps = 1e-6;
  for (Index f = 0; f < m.face_count(); ++f) {
    const Vec3 p0 = V.row(F(f, 0)), p1 = V.row(F(f, 1)), p2 = V.row(F(f, 2));
    const double area = heron(p0, p1, p2);
    Eigen::Matrix<double, 3, 2> dq;
    dq << p1 - p0, p2 - p0;
    const Eigen::Matrix2d g = dq.transpose() * dq;
    const Eigen::Matrix2d gi = g.inverse();
    auto dh_of = [&](const VertexField& x) {
      Eigen::Matrix<double, 3, 2> d;
      d << (x.row(F(f, 1)) - x.row(F(f, 0))).transpose(), (x.row(F(f, 2)) - x.row(F(f, 0))).transpose();
      return d;
    };
    auto dn_of = [&](const VertexField& x) {
      const Vec3 x0 = x.row(F(f, 0)), x1 = x.row(F(f, 1)), x2 = x.row(F(f, 2));
      return Vec3((unit_normal(p0 + eps * x0, p1 + eps * x1, p2 + eps * x2) -
                   unit_normal(p0 - eps * x0, p1 - eps * x1, p2 - eps * x2)) /
                  (2 * eps));
    };
    const auto dhh = dh_of(h), dhk = dh_of(k);
    const Eigen::Matrix2d dgh = dq.transpose() * dhh + dhh.transpose() * dq;
    const Eigen::Matrix2d dgk = dq.transpose() * dhk + dhk.transpose() * dq;
    o.t[1] += c.a1 * (gi * dgh * gi * dgk).trace() * area;
    o.t[2] += c.b1 * (gi * dgh).trace() * (gi * dgk).trace() * area;
    o.t[3] += c.c1 * dn_of(h).dot(dn_of(k)) * area;
    const Eigen::Matrix2d xh = dq.transpose() * dhh - dhh.transpose() * dq;
    const Eigen::Matrix2d xk = dq.transpose() * dhk - dhk.transpose() * dq;
    o.t[4] += c.d1 * (gi * xh * gi * xk.transpose()).trace() * area;
  }
  return o;
}

// permutation applied by shapes::permute_vertices, recovered from positions
std::vector<Index> recover_permutation(const TriangleMesh& from, const TriangleMesh& to) {
  std::map<std::tuple<double, double, double>, Index> where;
  for (Index i = 0; i < to.vertex_count(); ++i) {
    where[{to.vertices()(i, 0), to.vertices()(i, 1), to.vertices()(i, 2)}] = i;
  }
  std::vector<Index> perm(static_cast<std::size_t>(from.vertex_count()));
  for (Index i = 0; i < from.vertex_count(); ++i) {
    perm[i] = where.at({from.vertices()(i, 0), from.vertices()(i, 1), from.vertices()(i, 2)});
  }
  return perm;
}

// ---------------------------------------------------------------- coefficients

TEST(MetricCoefficients, Presets) {
  const auto b = MetricCoefficients::bodies().as_array();
  const auto f = MetricCoefficients::faces().as_array();
  EXPECT_EQ(b, (std::array<double, 6>{1, 1000, 100, 1, 1, 1}));
  EXPECT_EQ(f, (std::array<double, 6>{1, 10, 10, 10, 1, 1}));
}

TEST(MetricCoefficients, NondegeneracyFlag) {
  EXPECT_TRUE(MetricCoefficients::bodies().nondegenerate());
  EXPECT_TRUE((MetricCoefficients{1, 0, 0, 0, 0, 1}.nondegenerate()));
  EXPECT_TRUE((MetricCoefficients{1, 1, 1, 1, 1, 0}.nondegenerate()));
  EXPECT_FALSE((MetricCoefficients{0, 1, 1, 1, 1, 1}.nondegenerate()));
  EXPECT_FALSE((MetricCoefficients{1, 1, 0, 1, 1, 0}.nondegenerate()));
  EXPECT_THROW((MetricCoefficients{1, -1, 0, 0, 0, 0}.validate()), InvalidArgument);
  EXPECT_THROW((MetricCoefficients{1, 0, 0, NAN, 0, 0}.validate()), InvalidArgument);
}

TEST(MetricCoefficients, DegenerateWeightsOnlyWarn) {
  const TriangleMesh m = shapes::icosphere(1);
  const VertexField h = lt::random_field(m.vertex_count(), 1);
  EXPECT_NO_THROW(h2_inner(m, h, h, MetricCoefficients{0, 1, 0, 0, 0, 0}));
}

// ---------------------------------------------------------------- metric_terms

TEST(MetricTerms, ConstantFieldHasNoVariation) {
  const TriangleMesh m = lt::jittered_sphere(6, 8, 0.1, 2);
  VertexField h(m.vertex_count(), 3);
  h.rowwise() = Eigen::RowVector3d(1, 2, 3);
  const MetricTerms t = metric_terms(m, h);
  for (Index f = 0; f < m.face_count(); ++f) {
    EXPECT_LT(t.delta_g[f].cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT(t.delta_n.row(f).norm(), 1e-14);
    EXPECT_LT(t.dh[f].cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(MetricTerms, NormalFieldOnFlatPatchIsIsometricToFirstOrder) {
  const TriangleMesh g = shapes::grid(3, 3);
  VertexField h = VertexField::Zero(g.vertex_count(), 3);
  for (Index i = 0; i < h.rows(); ++i) h(i, 2) = 1e-3 * std::sin(3 * g.vertices()(i, 0) + g.vertices()(i, 1));
  const MetricTerms t = metric_terms(g, h);
  for (const auto& dg : t.delta_g) EXPECT_LT(dg.cwiseAbs().maxCoeff(), 1e-15);
  // and the second-order change of g is indeed nonzero
  const auto f0 = face_frames(g);
  const auto f1 = face_frames(g.with_vertices(g.vertices() + h));
  double second = 0;
  for (std::size_t i = 0; i < f0.size(); ++i) second = std::max(second, (f1[i].g - f0[i].g).cwiseAbs().maxCoeff());
  EXPECT_GT(second, 0.0);
}

TEST(MetricTerms, MatchFiniteDifferences) {
  const TriangleMesh m = lt::jittered_sphere(7, 9, 0.15, 3);
  const VertexField h = lt::random_field(m.vertex_count(), 4);
  const double eps = 1e-5;
  const auto fp = face_frames(m.with_vertices(m.vertices() + eps * h));
  const auto fm = face_frames(m.with_vertices(m.vertices() - eps * h));
  const MetricTerms t = metric_terms(m, h);
  for (Index f = 0; f < m.face_count(); ++f) {
    const Eigen::Matrix2d dg = (fp[f].g - fm[f].g) / (2 * eps);
    EXPECT_LT((dg - t.delta_g[f]).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_LT((t.delta_g[f] - t.delta_g[f].transpose()).cwiseAbs().maxCoeff(), 1e-12);
    const Vec3 dn = (fp[f].n - fm[f].n) / (2 * eps);
    EXPECT_LT((dn - t.delta_n.row(f).transpose()).norm(), 1e-6);
  }
  EXPECT_LT((t.laplacian - cotan_laplacian_apply(m, h)).cwiseAbs().maxCoeff(), 1e-14);
}

// ---------------------------------------------------------------- h2_inner

TEST(H2Inner, ConstantFieldL2Only) {
  const TriangleMesh m = lt::jittered_sphere(8, 10, 0.1, 5);
  VertexField h(m.vertex_count(), 3);
  const Vec3 v(0.3, -1.2, 0.7);
  h.rowwise() = v.transpose();
  const MetricCoefficients c{2.5, 0, 0, 0, 0, 0};
  const double expect = 2.5 * v.squaredNorm() * face_areas(m).sum();
  EXPECT_NEAR(h2_inner(m, h, h, c), expect, 1e-12 * expect);
  // derivative terms vanish for constants, so full coefficients agree too
  const MetricCoefficients full{2.5, 1000, 100, 1, 1, 1};
  EXPECT_NEAR(h2_inner(m, h, h, full), expect, 1e-9 * expect);
}

TEST(H2Inner, ZeroAndSymmetry) {
  const TriangleMesh m = lt::jittered_sphere(8, 10, 0.1, 6);
  const VertexField z = VertexField::Zero(m.vertex_count(), 3);
  const VertexField h = lt::random_field(m.vertex_count(), 7), k = lt::random_field(m.vertex_count(), 8);
  const auto c = MetricCoefficients::bodies();
  EXPECT_EQ(h2_inner(m, z, z, c), 0.0);
  const double a = h2_inner(m, h, k, c), b = h2_inner(m, k, h, c);
  EXPECT_LE(std::abs(a - b), 1e-12 * std::abs(a));
}

class H2Oracle : public ::testing::TestWithParam<int> {};

TEST_P(H2Oracle, TermsMatchIndependentTranscription) {
  const int seed = GetParam();
  const TriangleMesh m = lt::jittered_sphere(6 + seed % 3, 8, 0.2, seed);
  const VertexField h = lt::random_field(m.vertex_count(), seed + 10);
  const VertexField k = lt::random_field(m.vertex_count(), seed + 20);
  const auto c = MetricCoefficients::bodies();
  const OracleTerms o = oracle(m, h, k, c);
  const H2TermValues t = h2_terms(m, h, k, c);
  double scale = 0;
  for (double x : o.t) scale += std::abs(x);
  for (int i = 0; i < 6; ++i) {
    // the normal term goes through a finite difference in the oracle
    EXPECT_NEAR(t.terms[i], o.t[i], (i == 3 ? 1e-7 : 1e-10) * scale) << "term " << i;
  }
  EXPECT_NEAR(t.total(), h2_inner(m, h, k, c), 1e-12 * scale);
  const double hh = h2_inner(m, h, h, c);
  EXPECT_GT(hh, 0.0);
}

INSTANTIATE_TEST_SUITE_P(RandomMeshes, H2Oracle, ::testing::Range(1, 6));

TEST(H2Inner, PositiveForNonzeroFieldWithL2Term) {
  const TriangleMesh m = lt::jittered_sphere(6, 8, 0.1, 9);
  for (int s = 0; s < 10; ++s) {
    const VertexField h = lt::random_field(m.vertex_count(), 100 + s, 1e-3);
    EXPECT_GT(h2_inner(m, h, h, MetricCoefficients{1e-3, 0, 0, 0, 0, 0}), 0.0);
  }
}

TEST(H2Inner, RelabelingInvariance) {
  const TriangleMesh m = lt::jittered_sphere(7, 9, 0.1, 10);
  const TriangleMesh p = shapes::permute_vertices(m, 11);
  const auto perm = recover_permutation(m, p);
  const VertexField h = lt::random_field(m.vertex_count(), 12), k = lt::random_field(m.vertex_count(), 13);
  VertexField ph(h.rows(), 3), pk(k.rows(), 3);
  for (Index i = 0; i < h.rows(); ++i) {
    ph.row(perm[i]) = h.row(i);
    pk.row(perm[i]) = k.row(i);
  }
  const auto c = MetricCoefficients::bodies();
  const double a = h2_inner(m, h, k, c), b = h2_inner(p, ph, pk, c);
  EXPECT_NEAR(a, b, 1e-12 * std::sqrt(h2_inner(m, h, h, c) * h2_inner(m, k, k, c)));
}

TEST(MetricEmbedding, GramMatchesPairwiseInner) {
  const TriangleMesh m = lt::jittered_sphere(6, 8, 0.1, 14);
  const auto c = MetricCoefficients::faces();
  Eigen::MatrixXd fields(3 * m.vertex_count(), 4);
  std::vector<VertexField> hs;
  for (int i = 0; i < 4; ++i) {
    hs.push_back(lt::random_field(m.vertex_count(), 200 + i));
    fields.col(i) = flatten(hs.back());
  }
  const MetricEmbedding emb(m, c);
  EXPECT_EQ(emb.dimension(), 6 * m.vertex_count() + 8 * m.face_count());
  const Eigen::MatrixXd G = emb.gram(fields);
  EXPECT_EQ(G, G.transpose());
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const H2TermValues t = h2_terms(m, hs[i], hs[j], c);
      EXPECT_NEAR(G(i, j), t.total(), 1e-10 * std::abs(G(i, i)));
    }
  }
}

TEST(MetricEmbedding, IllConditionedFaceThrows) {
  VertexMatrix v(3, 3);
  v << 0, 0, 0, 1, 0, 0, 0.5, 1e-7, 0;
  FaceMatrix f(1, 3);
  f << 0, 1, 2;
  const TriangleMesh sliver(v, f);
  EXPECT_THROW(MetricEmbedding(sliver, MetricCoefficients::bodies()), DegenerateFaceError);
  const VertexField h = VertexField::Ones(3, 3);
  EXPECT_THROW(h2_inner(sliver, h, h, MetricCoefficients::bodies()), DegenerateFaceError);
}

TEST(H2EnergyGradient, MatchesFiniteDifferences) {
  const TriangleMesh m = lt::jittered_sphere(6, 7, 0.1, 15);
  const VertexField h = lt::random_field(m.vertex_count(), 16, 0.1);
  const auto c = MetricCoefficients::bodies();
  const H2EnergyGradient g = h2_energy_gradient(m, h, c);
  EXPECT_NEAR(g.value, h2_inner(m, h, h, c), 1e-12 * g.value);
  const VectorXd q0 = flatten(m.vertices());
  const VectorXd h0 = flatten(h);
  auto by_mesh = [&](const VectorXd& q) { return h2_inner(m.with_vertices(unflatten(q)), h, h, c); };
  auto by_field = [&](const VectorXd& x) { return h2_inner(m, unflatten(x), unflatten(x), c); };
  EXPECT_LT(lt::relative_error(flatten(g.d_mesh), lt::central_difference(by_mesh, q0)), 1e-6);
  EXPECT_LT(lt::relative_error(flatten(g.d_field), lt::central_difference(by_field, h0)), 1e-6);
}

// ---------------------------------------------------------------- path_energy

TEST(PathEnergy, ConstantPathIsZero) {
  const TriangleMesh m = lt::jittered_sphere(6, 8, 0.1, 17);
  EXPECT_EQ(path_energy({m, m, m, m}, MetricCoefficients::bodies()), 0.0);
}

TEST(PathEnergy, TranslationClosedForm) {
  const TriangleMesh m = lt::jittered_sphere(6, 8, 0.1, 18);
  const MetricCoefficients c{3.0, 0, 0, 0, 0, 0};
  std::vector<TriangleMesh> path;
  std::vector<Vec3> offsets = {Vec3(0, 0, 0), Vec3(0.1, 0, 0), Vec3(0.1, 0.3, 0), Vec3(0, 0.2, -0.1)};
  for (const Vec3& o : offsets) path.push_back(shapes::transform(m, Eigen::Matrix3d::Identity(), o));
  const double area = face_areas(m).sum();
  double expect = 0;
  for (std::size_t t = 0; t + 1 < offsets.size(); ++t) expect += c.a0 * (offsets[t + 1] - offsets[t]).squaredNorm() * area;
  expect *= static_cast<double>(offsets.size() - 1);
  EXPECT_NEAR(path_energy(path, c), expect, 1e-10 * expect);
  // bodies has a0 = 1 and every derivative term vanishes on translations
  EXPECT_NEAR(path_energy(path, MetricCoefficients::bodies()), expect / c.a0, 1e-9 * expect);
}

TEST(PathEnergy, TopologyMismatch) {
  const TriangleMesh a = shapes::icosphere(1), b = shapes::icosphere(2);
  EXPECT_THROW(path_energy({a, b}, MetricCoefficients::bodies()), TopologyMismatch);
}

std::vector<TriangleMesh> smooth_path(const TriangleMesh& m, int T) {
  std::vector<TriangleMesh> path;
  for (int t = 0; t <= T; ++t) {
    const double s = static_cast<double>(t) / T;
    path.push_back(shapes::bend(shapes::scale_axes(m, Vec3(1 + 0.3 * s, 1, 1 - 0.2 * s)), 0.8 * s));
  }
  return path;
}

TEST(PathEnergy, RefinementConverges) {
  const TriangleMesh m = lt::ellipsoid(Vec3(0.2, 0.5, 0.2), 10, 12);
  const auto c = MetricCoefficients::bodies();
  const double e10 = path_energy(smooth_path(m, 10), c);
  const double e20 = path_energy(smooth_path(m, 20), c);
  const double e40 = path_energy(smooth_path(m, 40), c);
  EXPECT_LT(std::abs(e20 - e10) / e20, 0.05);
  EXPECT_LT(std::abs(e40 - e20), std::abs(e20 - e10));
}

TEST(PathEnergy, SmallStepMatchesInnerProduct) {
  const TriangleMesh m = lt::jittered_sphere(6, 8, 0.1, 19);
  const VertexField h = lt::random_field(m.vertex_count(), 20);
  const auto c = MetricCoefficients::bodies();
  const double eps = 1e-6;
  const double e = path_energy({m, m.with_vertices(m.vertices() + eps * h)}, c) / (eps * eps);
  EXPECT_NEAR(e, h2_inner(m, h, h, c), 1e-4 * e);
}

TEST(PathEnergyGradient, MatchesFiniteDifferences) {
  const TriangleMesh m = lt::jittered_sphere(5, 6, 0.1, 21);
  std::vector<TriangleMesh> path;
  for (int t = 0; t < 4; ++t) path.push_back(m.with_vertices(m.vertices() + lt::random_field(m.vertex_count(), 30 + t, 0.02)));
  const auto c = MetricCoefficients::bodies();
  const PathEnergyGradient g = path_energy_gradient(path, c);
  EXPECT_NEAR(g.value, path_energy(path, c), 1e-12 * g.value);
  ASSERT_EQ(g.gradient.size(), path.size());
  for (std::size_t t = 0; t < path.size(); ++t) {
    auto f = [&](const VectorXd& x) {
      auto p = path;
      p[t] = m.with_vertices(unflatten(x));
      return path_energy(p, c);
    };
    EXPECT_LT(lt::relative_error(flatten(g.gradient[t]),
                                 lt::central_difference(f, flatten(path[t].vertices()))),
              1e-6)
        << "knot " << t;
  }
}

}  // namespace
