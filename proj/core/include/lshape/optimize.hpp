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

#include <functional>
#include <string_view>

#include <Eigen/Core>

namespace lshape {

/// Value of the objective at x; writes the gradient into *grad when non-null.
/// May throw DegenerateFaceError, which the line search treats as +inf.
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad)>;

struct OptimizerConfig {
  int max_iterations = 500;
  /// Stop when the largest gradient entry falls below this.
  double gradient_tolerance = 1e-8;
  /// Stop when (f_prev - f) <= function_tolerance * max(|f_prev|, |f|, 1).
  /// Zero disables the test.
  double function_tolerance = 1e-13;
  int memory = 10;
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;
  /// Trial steps per line search, including step halvings after
  /// non-finite or degenerate evaluations.
  int max_line_search = 30;

  void validate() const;
};

enum class Termination { converged, max_iterations, line_search_failure };

std::string_view to_string(Termination t);

struct OptimizeResult {
  Eigen::VectorXd x;
  double value = 0.0;
  double gradient_norm = 0.0;  // infinity norm at x
  int iterations = 0;
  int evaluations = 0;
  Termination reason = Termination::max_iterations;
};

/// Limited-memory BFGS with a strong-Wolfe line search. Accepted iterates
/// have nonincreasing objective values. The objective must be finite at x0.
OptimizeResult minimize(const Objective& f, Eigen::VectorXd x0,
                        const OptimizerConfig& cfg = {});

}  // namespace lshape
