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

#include <benchmark/benchmark.h>

#include <cmath>

#include "lshape/latent.hpp"
#include "lshape/metric.hpp"
#include "lshape/shapes.hpp"
#include "lshape/solvers.hpp"
#include "lshape/varifold.hpp"

namespace {

using namespace lshape;

// P smooth fields on the mesh: low-frequency sines along fixed directions
LatentBasis wave_basis(const TriangleMesh& m, int P) {
  Eigen::MatrixXd fields(3 * m.vertex_count(), P);
  for (int p = 0; p < P; ++p) {
    VertexField h(m.vertex_count(), 3);
    const Vec3 w(1 + p % 3, 1 + (p / 3) % 3, 1 + p % 2);
    const Vec3 dir = Vec3(std::cos(p), std::sin(p), 0.5).normalized();
    for (Index i = 0; i < m.vertex_count(); ++i) {
      h.row(i) = 0.05 * std::sin(w.dot(Vec3(m.vertices().row(i))) + p) * dir.transpose();
    }
    fields.col(p) = flatten(h);
  }
  return LatentBasis(m, fields, P / 2);
}

void BM_VarifoldSqdistGrad(benchmark::State& state) {
  const TriangleMesh a = shapes::icosphere(static_cast<int>(state.range(0)), 0.5);
  const TriangleMesh b = shapes::bend(shapes::scale_axes(a, Vec3(1.1, 1, 0.9)), 0.5);
  const VarifoldTarget target(b, {0.1});
  VertexField g;
  for (auto _ : state) benchmark::DoNotOptimize(target.sqdist(a, &g));
  state.counters["faces"] = static_cast<double>(a.face_count());
}
BENCHMARK(BM_VarifoldSqdistGrad)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_Gram(benchmark::State& state) {
  const TriangleMesh m = shapes::icosphere(3, 0.5);
  const LatentBasis basis = wave_basis(m, static_cast<int>(state.range(0)));
  const Eigen::VectorXd alpha = Eigen::VectorXd::Constant(basis.dimension(), 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(gram(basis, alpha, MetricCoefficients::bodies()));
}
BENCHMARK(BM_Gram)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_PathEnergyGradient(benchmark::State& state) {
  const TriangleMesh m = shapes::icosphere(3, 0.5);
  std::vector<TriangleMesh> path;
  for (int t = 0; t <= state.range(0); ++t) path.push_back(shapes::bend(m, 0.1 * t));
  for (auto _ : state) benchmark::DoNotOptimize(path_energy_gradient(path, MetricCoefficients::bodies()));
}
BENCHMARK(BM_PathEnergyGradient)->Arg(4)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_GeodesicIvp(benchmark::State& state) {
  const TriangleMesh m = shapes::icosphere(2, 0.5);
  const LatentBasis basis = wave_basis(m, 8);
  const Eigen::VectorXd beta = Eigen::VectorXd::Constant(8, 0.2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(geodesic_ivp(basis, Eigen::VectorXd::Zero(8), beta, 10, MetricCoefficients::bodies()));
  }
}
BENCHMARK(BM_GeodesicIvp)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
