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

#include "lshape/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "lshape/error.hpp"

namespace lshape {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Trial {
  double step = 0.0;
  double value = kInf;
  double slope = 0.0;  // directional derivative
  Eigen::VectorXd x;
  Eigen::VectorXd grad;
  bool finite() const { return std::isfinite(value); }
};

class LineSearch {
 public:
  LineSearch(const Objective& f, const OptimizerConfig& cfg, int& evals)
      : f_(f), cfg_(cfg), evals_(evals) {}

  // Returns true and fills `out` when a step with sufficient decrease is
  // found. Strong-Wolfe steps are preferred; an Armijo-only step is accepted
  // if the trial budget runs out.
  bool search(const Eigen::VectorXd& x, double f0, const Eigen::VectorXd& d,
              double slope0, double step0, Trial& out) {
    x0_ = &x;
    d_ = &d;
    f0_ = f0;
    slope0_ = slope0;
    trials_ = 0;
    Trial prev;
    prev.step = 0.0;
    prev.value = f0;
    prev.slope = slope0;
    double step = step0;
    best_ = Trial{};
    while (trials_ < cfg_.max_line_search) {
      Trial t = evaluate(step);
      if (!t.finite() || !armijo(t) || (prev.step > 0 && t.value >= prev.value)) {
        return zoom(prev, t, out);
      }
      if (curvature(t)) {
        out = std::move(t);
        return true;
      }
      if (t.slope >= 0) return zoom(t, prev, out);
      prev = std::move(t);
      step *= 2.0;
    }
    return fallback(out);
  }

 private:
  Trial evaluate(double step) {
    ++trials_;
    ++evals_;
    Trial t;
    t.step = step;
    t.x = *x0_ + step * *d_;
    try {
      t.value = f_(t.x, &t.grad);
    } catch (const DegenerateFaceError&) {
      t.value = kInf;
    }
    if (std::isfinite(t.value) && t.grad.allFinite()) {
      t.slope = t.grad.dot(*d_);
      if (armijo(t) && (!best_.finite() || t.value < best_.value)) best_ = t;
    } else {
      t.value = kInf;
    }
    return t;
  }

  bool armijo(const Trial& t) const {
    return t.finite() && t.value <= f0_ + cfg_.wolfe_c1 * t.step * slope0_;
  }
  bool curvature(const Trial& t) const {
    return std::abs(t.slope) <= -cfg_.wolfe_c2 * slope0_;
  }

  // lo satisfies Armijo and has the lower value of the bracket; hi may be
  // non-finite, in which case the interval is bisected.
  bool zoom(Trial lo, Trial hi, Trial& out) {
    while (trials_ < cfg_.max_line_search) {
      double step;
      const double a = lo.step, b = hi.step;
      if (hi.finite()) {
        step = cubic_min(lo, hi);
        const double lo_b = std::min(a, b), hi_b = std::max(a, b);
        const double margin = 0.1 * (hi_b - lo_b);
        if (!std::isfinite(step) || step < lo_b + margin || step > hi_b - margin) {
          step = 0.5 * (a + b);
        }
      } else {
        step = 0.5 * (a + b);
      }
      if (std::abs(b - a) < 1e-16 * std::max(1.0, std::abs(a))) break;
      Trial t = evaluate(step);
      if (!t.finite() || !armijo(t) || t.value >= lo.value) {
        hi = std::move(t);
        continue;
      }
      if (curvature(t)) {
        out = std::move(t);
        return true;
      }
      if (t.slope * (hi.step - lo.step) >= 0) hi = lo;
      lo = std::move(t);
    }
    return fallback(out);
  }

  bool fallback(Trial& out) {
    if (best_.finite() && best_.value < f0_) {
      out = best_;
      return true;
    }
    return false;
  }

  static double cubic_min(const Trial& p, const Trial& q) {
    const double d1 = p.slope + q.slope - 3.0 * (p.value - q.value) / (p.step - q.step);
    const double disc = d1 * d1 - p.slope * q.slope;
    if (disc < 0) return std::numeric_limits<double>::quiet_NaN();
    const double sgn = q.step > p.step ? 1.0 : -1.0;
    const double d2 = sgn * std::sqrt(disc);
    return q.step - (q.step - p.step) * (q.slope + d2 - d1) / (q.slope - p.slope + 2.0 * d2);
  }

  const Objective& f_;
  const OptimizerConfig& cfg_;
  int& evals_;
  const Eigen::VectorXd* x0_ = nullptr;
  const Eigen::VectorXd* d_ = nullptr;
  double f0_ = 0.0;
  double slope0_ = 0.0;
  int trials_ = 0;
  Trial best_;
};

}  // namespace

void OptimizerConfig::validate() const {
  if (max_iterations < 0 || !(gradient_tolerance > 0) ||
      !(function_tolerance >= 0) || memory < 1 || !(wolfe_c1 > 0) ||
      !(wolfe_c2 > wolfe_c1) || !(wolfe_c2 < 1) || max_line_search < 1) {
    throw InvalidArgument("invalid optimizer configuration");
  }
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::converged:
      return "converged";
    case Termination::max_iterations:
      return "max_iterations";
    case Termination::line_search_failure:
      return "line_search_failure";
  }
  return "unknown";
}

OptimizeResult minimize(const Objective& f, Eigen::VectorXd x0,
                        const OptimizerConfig& cfg) {
  cfg.validate();
  OptimizeResult r;
  r.x = std::move(x0);
  Eigen::VectorXd g;
  r.value = f(r.x, &g);
  r.evaluations = 1;
  if (!std::isfinite(r.value) || !g.allFinite()) {
    throw NumericalFailure("objective is not finite at the starting point");
  }
  r.gradient_norm = g.size() ? g.lpNorm<Eigen::Infinity>() : 0.0;
  if (r.gradient_norm < cfg.gradient_tolerance) {
    r.reason = Termination::converged;
    return r;
  }

  std::deque<Eigen::VectorXd> s_hist, y_hist;
  std::deque<double> rho_hist;
  LineSearch ls(f, cfg, r.evaluations);
  r.reason = Termination::max_iterations;

  while (r.iterations < cfg.max_iterations) {
    // two-loop recursion
    Eigen::VectorXd d = -g;
    std::vector<double> alpha(s_hist.size());
    for (std::size_t i = s_hist.size(); i-- > 0;) {
      alpha[i] = rho_hist[i] * s_hist[i].dot(d);
      d -= alpha[i] * y_hist[i];
    }
    if (!s_hist.empty()) {
      d *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    }
    for (std::size_t i = 0; i < s_hist.size(); ++i) {
      const double beta = rho_hist[i] * y_hist[i].dot(d);
      d += (alpha[i] - beta) * s_hist[i];
    }
    double slope = g.dot(d);
    if (!(slope < 0)) {
      d = -g;
      slope = -g.squaredNorm();
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
    }
    const double step0 =
        s_hist.empty() ? std::min(1.0, 1.0 / std::max(1e-300, g.norm())) : 1.0;

    Trial t;
    bool ok = ls.search(r.x, r.value, d, slope, step0, t);
    if (!ok && !s_hist.empty()) {
      // retry along steepest descent with a fresh memory
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      d = -g;
      ok = ls.search(r.x, r.value, d, -g.squaredNorm(),
                     std::min(1.0, 1.0 / std::max(1e-300, g.norm())), t);
    }
    if (!ok) {
      r.reason = Termination::line_search_failure;
      break;
    }
    ++r.iterations;
    Eigen::VectorXd s = t.x - r.x;
    Eigen::VectorXd y = t.grad - g;
    const double f_prev = r.value;
    r.x = std::move(t.x);
    r.value = t.value;
    g = std::move(t.grad);
    r.gradient_norm = g.lpNorm<Eigen::Infinity>();

    const double sy = s.dot(y);
    if (sy > 1e-12 * std::sqrt(s.squaredNorm() * y.squaredNorm()) && sy > 0) {
      if (static_cast<int>(s_hist.size()) == cfg.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
      rho_hist.push_back(1.0 / sy);
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
    }

    if (r.gradient_norm < cfg.gradient_tolerance) {
      r.reason = Termination::converged;
      break;
    }
    const double scale = std::max({std::abs(f_prev), std::abs(r.value), 1.0});
    if (cfg.function_tolerance > 0 &&
        f_prev - r.value <= cfg.function_tolerance * scale) {
      r.reason = Termination::converged;
      break;
    }
  }
  return r;
}

}  // namespace lshape
