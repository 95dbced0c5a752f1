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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "lshape/metric.hpp"
#include "lshape/optimize.hpp"
#include "lshape/solvers.hpp"

namespace lshape::cli {

/// Everything a command needs besides its positional arguments.
struct RunConfig {
  MetricCoefficients metric = MetricCoefficients::bodies();
  MultiscaleSchedule schedule = MultiscaleSchedule::bodies();

  int steps = 10;      // T for retrieval and boundary value problems
  int ivp_steps = 10;  // N for shooting
  OptimizerConfig optimizer;
  IvpConfig ivp;

  std::filesystem::path basis_path = "basis.lsb";
  int shape_components = 40;  // m
  int pose_components = 130;  // n
  int geodesic_steps = 10;    // T for the training geodesics
  bool center_shape = true;
  bool center_pose = false;

  std::filesystem::path gmm_path = "gmm.lsg";
  int gmm_shape_components = 6;
  int gmm_pose_components = 10;
  int em_iterations = 200;

  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "out";
  bool normalize = true;
  std::string mesh_format = "obj";

  /// Checks every field against its module's invariants.
  void validate() const;
};

/// Reads an INI file with sections [metric], [schedule], [solver], [basis],
/// [generation] and [io]. Missing keys keep their defaults; unknown keys are
/// rejected. Relative paths resolve against the file's directory.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});

/// Writes every field, with paths made absolute, so the file reproduces the
/// run when passed back through --config.
void write_config(const RunConfig& cfg, std::ostream& out);
void save_config(const RunConfig& cfg, const std::filesystem::path& path);

}  // namespace lshape::cli
