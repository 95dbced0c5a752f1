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
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "lshape/latent.hpp"
#include "lshape/metric.hpp"
#include "lshape/solvers.hpp"

namespace lshape {

/// Gaussian mixture with full covariances. A model of dimension 0 (no
/// components) is allowed and stands for an empty block.
struct GmmModel {
  std::vector<double> weights;
  std::vector<Eigen::VectorXd> means;
  std::vector<Eigen::MatrixXd> covariances;

  Index dimension() const { return means.empty() ? 0 : means.front().size(); }
  std::size_t size() const { return weights.size(); }

  /// Sizes agree, weights are nonnegative and sum to one, covariances are
  /// symmetric. Throws InvalidArgument otherwise.
  void validate() const;

  /// Mean log density of the rows of `x`.
  double mean_log_likelihood(const Eigen::MatrixXd& x) const;

  /// One draw; zero covariances return the component mean exactly.
  Eigen::VectorXd sample(std::mt19937_64& rng) const;
};

struct GmmFitOptions {
  int components = 1;
  std::uint64_t seed = 0;
  int max_iterations = 200;
  /// Stop once the mean log-likelihood gains less than this.
  double tolerance = 1e-10;
};

/// EM fit from a k-means++ seeding. Rows of `samples` are observations.
/// Covariances carry a diagonal load of 1e-8 trace(sample cov) / dim. A
/// component that loses all responsibility is re-seeded once; a second
/// collapse throws NumericalFailure. `log_likelihood`, when given, receives
/// the mean log-likelihood after every E step since the last re-seed.
GmmModel fit_gmm(const Eigen::MatrixXd& samples, const GmmFitOptions& options,
                 std::vector<double>* log_likelihood = nullptr);

/// Independent draws from both mixtures concatenated as (shape, pose).
Eigen::VectorXd sample_code(const GmmModel& shape_gmm, const GmmModel& pose_gmm,
                            std::uint64_t seed);

struct GenerationResult {
  TriangleMesh mesh;
  Eigen::VectorXd velocity;  // velocity actually shot (after any halving)
  LatentPath path;
  int halvings = 0;
};

/// Samples a velocity, shoots a geodesic from the template (alpha = 0) and
/// decodes its end point. A failed shot is retried with the velocity halved,
/// up to three times.
GenerationResult generate_shape(const LatentBasis& basis,
                                const GmmModel& shape_gmm,
                                const GmmModel& pose_gmm, int steps,
                                const MetricCoefficients& c,
                                const IvpConfig& cfg, std::uint64_t seed);

inline constexpr std::uint32_t kGmmFormatVersion = 1;

void write_gmm_pair(const GmmModel& shape_gmm, const GmmModel& pose_gmm,
                    std::ostream& out);
std::pair<GmmModel, GmmModel> read_gmm_pair(std::istream& in);
void save_gmm_pair(const GmmModel& shape_gmm, const GmmModel& pose_gmm,
                   const std::filesystem::path& path);
std::pair<GmmModel, GmmModel> load_gmm_pair(const std::filesystem::path& path);

}  // namespace lshape
