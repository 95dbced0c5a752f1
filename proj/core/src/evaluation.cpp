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

#include "lshape/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>

#include <boost/geometry.hpp>
#include <boost/geometry/index/rtree.hpp>

#include "lshape/error.hpp"
#include "lshape/varifold.hpp"

namespace lshape {

namespace {

namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;
using BPoint = bg::model::point<double, 3, bg::cs::cartesian>;
using Entry = std::pair<BPoint, Index>;
using Tree = bgi::rtree<Entry, bgi::quadratic<16>>;

Tree build_tree(const VertexMatrix& v) {
  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(v.rows()));
  for (Index i = 0; i < v.rows(); ++i) {
    entries.emplace_back(BPoint(v(i, 0), v(i, 1), v(i, 2)), i);
  }
  return Tree(entries.begin(), entries.end());  // packing constructor
}

double dist(const VertexMatrix& a, Index i, const VertexMatrix& b, Index j) {
  const double dx = a(i, 0) - b(j, 0), dy = a(i, 1) - b(j, 1), dz = a(i, 2) - b(j, 2);
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

// For each row of `query`, the index of the nearest row of `ref`.
std::vector<Index> nearest(const VertexMatrix& query, const VertexMatrix& ref) {
  const Tree tree = build_tree(ref);
  std::vector<Index> out(static_cast<std::size_t>(query.rows()));
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < query.rows(); ++i) {
    std::vector<Entry> hit;
    tree.query(bgi::nearest(BPoint(query(i, 0), query(i, 1), query(i, 2)), 1),
               std::back_inserter(hit));
    out[static_cast<std::size_t>(i)] = hit.front().second;
  }
  return out;
}

std::vector<double> nearest_distances(const VertexMatrix& query,
                                      const VertexMatrix& ref) {
  const auto idx = nearest(query, ref);
  std::vector<double> d(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    d[i] = dist(query, static_cast<Index>(i), ref, idx[i]);
  }
  return d;
}

void check_nonempty(const VertexMatrix& a, const VertexMatrix& b) {
  if (a.rows() == 0 || b.rows() == 0) throw InvalidArgument("empty point set");
}

}  // namespace

double hausdorff(const VertexMatrix& a, const VertexMatrix& b) {
  check_nonempty(a, b);
  const auto ab = nearest_distances(a, b);
  const auto ba = nearest_distances(b, a);
  return std::max(*std::max_element(ab.begin(), ab.end()),
                  *std::max_element(ba.begin(), ba.end()));
}

double hausdorff(const TriangleMesh& a, const TriangleMesh& b) {
  return hausdorff(a.vertices(), b.vertices());
}

double chamfer(const VertexMatrix& a, const VertexMatrix& b) {
  check_nonempty(a, b);
  const auto ab = nearest_distances(a, b);
  const auto ba = nearest_distances(b, a);
  double sa = 0.0, sb = 0.0;
  for (double d : ab) sa += d;
  for (double d : ba) sb += d;
  return sa / static_cast<double>(ab.size()) + sb / static_cast<double>(ba.size());
}

double chamfer(const TriangleMesh& a, const TriangleMesh& b) {
  return chamfer(a.vertices(), b.vertices());
}

double registered_mse(const TriangleMesh& a, const TriangleMesh& b) {
  if (!a.same_topology(b)) {
    throw TopologyMismatch("registered MSE needs meshes with one connectivity");
  }
  double s = 0.0;
  for (Index i = 0; i < a.vertex_count(); ++i) {
    s += (a.vertices().row(i) - b.vertices().row(i)).squaredNorm();
  }
  return s / static_cast<double>(a.vertex_count());
}

double geodesic_correspondence_error(
    const VertexMatrix& pred, const VertexMatrix& truth,
    const std::vector<std::pair<int, int>>& edges) {
  const Index n = truth.rows();
  if (pred.rows() != n) throw TopologyMismatch("vertex counts differ");
  if (n == 0) throw InvalidArgument("empty point set");
  std::vector<std::vector<std::pair<Index, double>>> adj(static_cast<std::size_t>(n));
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) throw InvalidArgument("edge index out of range");
    const double w = dist(truth, u, truth, v);
    adj[static_cast<std::size_t>(u)].emplace_back(v, w);
    adj[static_cast<std::size_t>(v)].emplace_back(u, w);
  }
  {
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::vector<Index> stack{0};
    seen[0] = true;
    Index reached = 1;
    while (!stack.empty()) {
      const Index u = stack.back();
      stack.pop_back();
      for (const auto& [v, w] : adj[static_cast<std::size_t>(u)]) {
        if (!seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = true;
          ++reached;
          stack.push_back(v);
        }
      }
    }
    if (reached != n) throw InvalidArgument("truth mesh graph is disconnected");
  }
  const auto snap = nearest(pred, truth);
  std::vector<double> err(static_cast<std::size_t>(n), 0.0);
#pragma omp parallel for schedule(dynamic, 64)
  for (Index i = 0; i < n; ++i) {
    const Index src = snap[static_cast<std::size_t>(i)];
    if (src == i) continue;
    // Dijkstra from src with early exit at i
    std::vector<double> d(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
    using Item = std::pair<double, Index>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    d[static_cast<std::size_t>(src)] = 0.0;
    pq.emplace(0.0, src);
    while (!pq.empty()) {
      const auto [du, u] = pq.top();
      pq.pop();
      if (u == i) break;
      if (du > d[static_cast<std::size_t>(u)]) continue;
      for (const auto& [v, w] : adj[static_cast<std::size_t>(u)]) {
        const double nd = du + w;
        if (nd < d[static_cast<std::size_t>(v)]) {
          d[static_cast<std::size_t>(v)] = nd;
          pq.emplace(nd, v);
        }
      }
    }
    err[static_cast<std::size_t>(i)] = d[static_cast<std::size_t>(i)];
  }
  double s = 0.0;
  for (double e : err) s += e;
  return s / static_cast<double>(n);
}

double geodesic_correspondence_error(const TriangleMesh& pred,
                                     const TriangleMesh& truth) {
  if (!pred.same_topology(truth)) {
    throw TopologyMismatch("geodesic error needs meshes with one connectivity");
  }
  std::set<std::pair<int, int>> e;
  const auto& f = truth.faces();
  for (Index i = 0; i < f.rows(); ++i) {
    for (int k = 0; k < 3; ++k) {
      const int a = f(i, k), b = f(i, (k + 1) % 3);
      e.emplace(std::min(a, b), std::max(a, b));
    }
  }
  return geodesic_correspondence_error(pred.vertices(), truth.vertices(),
                                       {e.begin(), e.end()});
}

std::optional<double> EvalReport::get(const std::string& name) const {
  for (const auto& [k, v] : values) {
    if (k == name) return v;
  }
  return std::nullopt;
}

EvalReport evaluate_pair(const TriangleMesh& a, const TriangleMesh& b,
                         std::optional<double> sigma) {
  EvalReport r;
  r.values.emplace_back("hausdorff", hausdorff(a, b));
  r.values.emplace_back("chamfer", chamfer(a, b));
  if (sigma) {
    r.values.emplace_back("varifold_relative",
                          remeshing_relative_error(a, b, {*sigma}).front());
  }
  if (a.same_topology(b)) {
    r.values.emplace_back("registered_mse", registered_mse(a, b));
    r.values.emplace_back("geodesic_error", geodesic_correspondence_error(a, b));
  }
  return r;
}

}  // namespace lshape
