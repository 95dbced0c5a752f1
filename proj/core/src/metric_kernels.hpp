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

// Per-face metric kernels shared by the value and gradient paths. The kernels
// are templated on the scalar so the same expression is differentiated with
// forward-mode dual numbers.

#include <cmath>

#include <Eigen/Core>
#include <unsupported/Eigen/AutoDiff>

#include "lshape/metric.hpp"

namespace lshape::detail {

template <class S>
using V3 = Eigen::Matrix<S, 3, 1>;

enum class Variation {
  analytic,           // dg = dq^T dh + dh^T dq, dn from the derivative of n
  finite_difference,  // dg = g(q + h) - g(q), dn = n(q + h) - n(q)
};

/// Frozen per-corner data for differentiating the second-order term.
///
/// With L_i and vol_i held fixed, sum_f [ lambda_i . c_{f,i} + mu_i area_f/3 ]
/// has the same gradient as sum_i |L_i|^2 vol_i, where c_{f,i} is face f's
/// contribution to L_i, lambda_i = 2 vol_i L_i and mu_i = |L_i|^2.
struct LaplaceAdjoint {
  Vec3 lambda[3];
  double mu[3];
};

template <class S>
V3<S> cross(const V3<S>& a, const V3<S>& b) {
  return V3<S>(a.y() * b.z() - a.z() * b.y(), a.z() * b.x() - a.x() * b.z(),
               a.x() * b.y() - a.y() * b.x());
}

template <class S>
S dot(const V3<S>& a, const V3<S>& b) {
  return a.x() * b.x() + a.y() * b.y() + a.z() * b.z();
}

/// Face part of G_q(h, h): the a0 term distributed onto faces, the four
/// first-order terms, and, when `lap` is given, the surrogate of the a2 term.
template <class S>
S face_energy(const V3<S> q[3], const V3<S> h[3], const MetricCoefficients& c,
              Variation var, const LaplaceAdjoint* lap) {
  using std::sqrt;
  const V3<S> e1 = q[1] - q[0];
  const V3<S> e2 = q[2] - q[0];
  const V3<S> d1 = h[1] - h[0];
  const V3<S> d2 = h[2] - h[0];
  const V3<S> u = cross(e1, e2);
  const S un = sqrt(dot(u, u));
  const S area = un / 2.0;

  S energy = S(0.0);
  if (c.a0 != 0.0) {
    energy += c.a0 * area / 3.0 * (dot(h[0], h[0]) + dot(h[1], h[1]) + dot(h[2], h[2]));
  }

  const S g11 = dot(e1, e1), g12 = dot(e1, e2), g22 = dot(e2, e2);
  const S det = g11 * g22 - g12 * g12;

  if (c.a1 != 0.0 || c.b1 != 0.0) {
    S dg11 = 2.0 * dot(e1, d1);
    S dg12 = dot(e1, d2) + dot(d1, e2);
    S dg22 = 2.0 * dot(e2, d2);
    if (var == Variation::finite_difference) {
      dg11 += dot(d1, d1);
      dg12 += dot(d1, d2);
      dg22 += dot(d2, d2);
    }
    const S i11 = g22 / det, i12 = -g12 / det, i22 = g11 / det;
    const S x11 = i11 * dg11 + i12 * dg12;
    const S x12 = i11 * dg12 + i12 * dg22;
    const S x21 = i12 * dg11 + i22 * dg12;
    const S x22 = i12 * dg12 + i22 * dg22;
    const S tr = x11 + x22;
    const S trxx = x11 * x11 + 2.0 * x12 * x21 + x22 * x22;
    energy += area * (c.a1 * trxx + c.b1 * tr * tr);
  }

  if (c.c1 != 0.0) {
    const V3<S> n = u / un;
    V3<S> dn;
    if (var == Variation::analytic) {
      const V3<S> du = cross(d1, e2) + cross(e1, d2);
      dn = (du - n * dot(n, du)) / un;
    } else {
      const V3<S> u2 = cross(V3<S>(e1 + d1), V3<S>(e2 + d2));
      dn = u2 / sqrt(dot(u2, u2)) - n;
    }
    energy += c.c1 * area * dot(dn, dn);
  }

  if (c.d1 != 0.0) {
    // xi = dq^T dh - dh^T dq is antisymmetric, xi = s J, and
    // tr(g^-1 J g^-1 J^T) = 2 / det g.
    const S s = dot(e1, d2) - dot(d1, e2);
    energy += c.d1 * area * 2.0 * s * s / det;
  }

  if (lap != nullptr && c.a2 != 0.0) {
    const V3<S>* corner_q = q;
    S surrogate = S(0.0);
    for (int k = 0; k < 3; ++k) {
      const int a = (k + 1) % 3, b = (k + 2) % 3;
      const S w = dot(V3<S>(corner_q[a] - corner_q[k]),
                      V3<S>(corner_q[b] - corner_q[k])) / un;
      const V3<S> diff = h[a] - h[b];
      const V3<S> la = lap->lambda[a].template cast<S>();
      const V3<S> lb = lap->lambda[b].template cast<S>();
      surrogate += w * (dot(la, diff) - dot(lb, diff));
    }
    surrogate += (lap->mu[0] + lap->mu[1] + lap->mu[2]) * area / 3.0;
    energy += c.a2 * surrogate;
  }
  return energy;
}

using Dual18 = Eigen::AutoDiffScalar<Eigen::Matrix<double, 18, 1>>;

/// Evaluates face_energy on dual numbers seeded on (q, h) and returns the value
/// with the 18 partial derivatives (q0, q1, q2, h0, h1, h2; xyz each).
inline double face_energy_gradient(const Vec3 q[3], const Vec3 h[3],
                                   const MetricCoefficients& c, Variation var,
                                   const LaplaceAdjoint* lap,
                                   Eigen::Matrix<double, 18, 1>& grad) {
  V3<Dual18> qd[3], hd[3];
  for (int v = 0; v < 3; ++v) {
    for (int k = 0; k < 3; ++k) {
      qd[v][k] = Dual18(q[v][k], 18, 3 * v + k);
      hd[v][k] = Dual18(h[v][k], 18, 9 + 3 * v + k);
    }
  }
  const Dual18 e = face_energy<Dual18>(qd, hd, c, var, lap);
  grad = e.derivatives();
  return e.value();
}

}  // namespace lshape::detail
