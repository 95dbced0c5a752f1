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

#include "lshape/generation.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "binary_io.hpp"
#include "lshape/error.hpp"

namespace lshape {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

// Log density of every row of x under N(mean, cov).
Eigen::VectorXd log_gaussian(const Eigen::MatrixXd& x, const Eigen::VectorXd& mean,
                             const Eigen::MatrixXd& cov) {
  const Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw NumericalFailure("mixture covariance is not positive definite");
  }
  const Eigen::MatrixXd l = llt.matrixL();
  const double log_det = 2.0 * l.diagonal().array().log().sum();
  Eigen::MatrixXd centered = (x.rowwise() - mean.transpose()).transpose();
  llt.matrixL().solveInPlace(centered);
  const Eigen::VectorXd maha = centered.colwise().squaredNorm().transpose();
  const double d = static_cast<double>(mean.size());
  return (-0.5 * (maha.array() + log_det + d * kLog2Pi)).matrix();
}

// Per-row log-sum-exp of a (rows x K) matrix.
Eigen::VectorXd log_sum_exp_rows(const Eigen::MatrixXd& a) {
  Eigen::VectorXd out(a.rows());
  for (Index i = 0; i < a.rows(); ++i) {
    const double m = a.row(i).maxCoeff();
    out[i] = m + std::log((a.row(i).array() - m).exp().sum());
  }
  return out;
}

Eigen::MatrixXd log_joint(const GmmModel& g, const Eigen::MatrixXd& x) {
  Eigen::MatrixXd lj(x.rows(), static_cast<Index>(g.size()));
  for (std::size_t k = 0; k < g.size(); ++k) {
    lj.col(static_cast<Index>(k)) =
        log_gaussian(x, g.means[k], g.covariances[k]).array() + std::log(g.weights[k]);
  }
  return lj;
}

Eigen::MatrixXd square_root(const Eigen::MatrixXd& cov) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  const Eigen::VectorXd s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * s.asDiagonal();
}

std::vector<Index> kmeanspp(const Eigen::MatrixXd& x, int k, std::mt19937_64& rng) {
  const Index n = x.rows();
  std::vector<Index> centers;
  std::uniform_int_distribution<Index> first(0, n - 1);
  centers.push_back(first(rng));
  Eigen::VectorXd d2 = (x.rowwise() - x.row(centers[0])).rowwise().squaredNorm();
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  while (static_cast<int>(centers.size()) < k) {
    const double total = d2.sum();
    Index pick = 0;
    if (total > 0) {
      const double u = unif(rng) * total;
      double acc = 0.0;
      pick = n - 1;
      for (Index i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc >= u && d2[i] > 0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = first(rng);
    }
    centers.push_back(pick);
    d2 = d2.cwiseMin((x.rowwise() - x.row(pick)).rowwise().squaredNorm());
  }
  return centers;
}

void m_step(GmmModel& g, const Eigen::MatrixXd& x, const Eigen::MatrixXd& resp,
            double load, std::vector<Index>& empty) {
  const double n = static_cast<double>(x.rows());
  empty.clear();
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto col = resp.col(static_cast<Index>(k));
    const double nk = col.sum();
    if (!(nk > 1e-10 * n)) {
      empty.push_back(static_cast<Index>(k));
      continue;
    }
    g.weights[k] = nk / n;
    g.means[k] = (x.transpose() * col) / nk;
    const Eigen::MatrixXd c = x.rowwise() - g.means[k].transpose();
    Eigen::MatrixXd cov = c.transpose() * col.asDiagonal() * c / nk;
    cov = 0.5 * (cov + cov.transpose());
    cov.diagonal().array() += load;
    g.covariances[k] = std::move(cov);
  }
}

}  // namespace

void GmmModel::validate() const {
  if (means.size() != weights.size() || covariances.size() != weights.size()) {
    throw InvalidArgument("mixture component arrays differ in length");
  }
  double sum = 0.0;
  const Index d = dimension();
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (!(weights[k] >= 0) || !std::isfinite(weights[k])) {
      throw InvalidArgument("mixture weights must be nonnegative");
    }
    sum += weights[k];
    if (means[k].size() != d || covariances[k].rows() != d || covariances[k].cols() != d) {
      throw InvalidArgument("mixture component dimensions differ");
    }
    const auto& c = covariances[k];
    const double scale = std::max(1.0, c.size() ? c.cwiseAbs().maxCoeff() : 0.0);
    if (c.size() && (c - c.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw InvalidArgument("mixture covariance is not symmetric");
    }
  }
  if (!weights.empty() && std::abs(sum - 1.0) > 1e-10) {
    throw InvalidArgument("mixture weights do not sum to one");
  }
}

double GmmModel::mean_log_likelihood(const Eigen::MatrixXd& x) const {
  return log_sum_exp_rows(log_joint(*this, x)).mean();
}

Eigen::VectorXd GmmModel::sample(std::mt19937_64& rng) const {
  if (weights.empty()) return {};
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);
  std::size_t k = weights.size() - 1;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) {
      k = i;
      break;
    }
  }
  std::normal_distribution<double> normal;
  Eigen::VectorXd z(dimension());
  for (Index i = 0; i < z.size(); ++i) z[i] = normal(rng);
  return means[k] + square_root(covariances[k]) * z;
}

GmmModel fit_gmm(const Eigen::MatrixXd& samples, const GmmFitOptions& options,
                 std::vector<double>* log_likelihood) {
  const Index n = samples.rows();
  const Index d = samples.cols();
  const int k = options.components;
  if (k < 1) throw InvalidArgument("mixture needs at least one component");
  if (d < 1) throw InvalidArgument("mixture samples have dimension 0");
  if (n < k) throw InvalidArgument("fewer samples than mixture components");
  if (!samples.allFinite()) throw InvalidArgument("mixture samples are not finite");

  const Eigen::RowVectorXd mu = samples.colwise().mean();
  const Eigen::MatrixXd centered = samples.rowwise() - mu;
  const double trace = centered.squaredNorm() / static_cast<double>(n);
  const double load = trace > 0 ? 1e-8 * trace / static_cast<double>(d) : 1e-12;

  std::mt19937_64 rng(options.seed);
  GmmModel g;
  g.weights.assign(static_cast<std::size_t>(k), 1.0 / k);
  g.means.assign(static_cast<std::size_t>(k), Eigen::VectorXd::Zero(d));
  g.covariances.assign(static_cast<std::size_t>(k), Eigen::MatrixXd::Zero(d, d));

  // hard assignment to the seeded centres
  const auto centers = kmeanspp(samples, k, rng);
  Eigen::MatrixXd resp = Eigen::MatrixXd::Zero(n, k);
  for (Index i = 0; i < n; ++i) {
    Index best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int j = 0; j < k; ++j) {
      const double dist = (samples.row(i) - samples.row(centers[static_cast<std::size_t>(j)])).squaredNorm();
      if (dist < best_d) {
        best_d = dist;
        best = j;
      }
    }
    resp(i, best) = 1.0;
  }

  std::vector<double> trace_ll;
  std::vector<Index> empty;
  bool reseeded = false;
  m_step(g, samples, resp, load, empty);
  for (int it = 0;; ++it) {
    if (!empty.empty()) {
      if (reseeded) {
        throw NumericalFailure("mixture component collapsed after re-seeding");
      }
      reseeded = true;
      trace_ll.clear();
      // move each empty component onto the worst-explained sample
      std::vector<Index> live;
      for (int j = 0; j < k; ++j) {
        if (std::find(empty.begin(), empty.end(), j) == empty.end()) live.push_back(j);
      }
      Eigen::VectorXd score = Eigen::VectorXd::Constant(n, -std::numeric_limits<double>::infinity());
      if (!live.empty()) {
        GmmModel partial;
        double wsum = 0.0;
        for (Index j : live) wsum += g.weights[static_cast<std::size_t>(j)];
        for (Index j : live) {
          partial.weights.push_back(g.weights[static_cast<std::size_t>(j)] / wsum);
          partial.means.push_back(g.means[static_cast<std::size_t>(j)]);
          partial.covariances.push_back(g.covariances[static_cast<std::size_t>(j)]);
        }
        score = log_sum_exp_rows(log_joint(partial, samples));
      }
      const Eigen::MatrixXd full_cov =
          (centered.transpose() * centered / static_cast<double>(n)) +
          load * Eigen::MatrixXd::Identity(d, d);
      for (Index j : empty) {
        Index worst;
        score.minCoeff(&worst);
        g.means[static_cast<std::size_t>(j)] = samples.row(worst).transpose();
        g.covariances[static_cast<std::size_t>(j)] = full_cov;
        g.weights[static_cast<std::size_t>(j)] = 1.0 / k;
        score[worst] = std::numeric_limits<double>::infinity();
      }
      double wsum = 0.0;
      for (double w : g.weights) wsum += w;
      for (double& w : g.weights) w /= wsum;
    }
    // E step
    const Eigen::MatrixXd lj = log_joint(g, samples);
    const Eigen::VectorXd lse = log_sum_exp_rows(lj);
    const double ll = lse.mean();
    trace_ll.push_back(ll);
    const bool done =
        it >= options.max_iterations ||
        (trace_ll.size() > 1 &&
         ll - trace_ll[trace_ll.size() - 2] < options.tolerance * std::max(1.0, std::abs(ll)));
    if (done) break;
    resp = (lj.colwise() - lse).array().exp().matrix();
    m_step(g, samples, resp, load, empty);
  }
  if (log_likelihood) *log_likelihood = std::move(trace_ll);
  g.validate();
  return g;
}

Eigen::VectorXd sample_code(const GmmModel& shape_gmm, const GmmModel& pose_gmm,
                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Eigen::VectorXd a = shape_gmm.sample(rng);
  const Eigen::VectorXd b = pose_gmm.sample(rng);
  Eigen::VectorXd out(a.size() + b.size());
  out << a, b;
  return out;
}

GenerationResult generate_shape(const LatentBasis& basis,
                                const GmmModel& shape_gmm,
                                const GmmModel& pose_gmm, int steps,
                                const MetricCoefficients& c,
                                const IvpConfig& cfg, std::uint64_t seed) {
  if (shape_gmm.dimension() != basis.shape_count() ||
      pose_gmm.dimension() != basis.pose_count()) {
    throw InvalidArgument("mixture dimensions do not match the basis blocks");
  }
  Eigen::VectorXd beta = sample_code(shape_gmm, pose_gmm, seed);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(basis.dimension());
  for (int attempt = 0;; ++attempt) {
    try {
      LatentPath path = geodesic_ivp(basis, zero, beta, steps, c, cfg);
      TriangleMesh mesh = basis.decode(path.back());
      return {std::move(mesh), beta, std::move(path), attempt};
    } catch (const NumericalFailure& e) {
      if (attempt >= 3) {
        throw NumericalFailure(std::string("generation failed after 3 halvings: ") + e.what(),
                               e.step());
      }
      beta *= 0.5;
    }
  }
}

// ------------------------------------------------------------ file format

namespace {

constexpr char kGmmMagic[8] = {'L', 'S', 'G', 'M', 'M', '\0', '\0', '\0'};

void write_model(const GmmModel& g, std::ostream& out) {
  detail::put_u64(out, g.size());
  detail::put_u64(out, static_cast<std::uint64_t>(g.dimension()));
  for (double w : g.weights) detail::put_f64(out, w);
  for (const auto& m : g.means) detail::put_f64_array(out, m.data(), static_cast<std::size_t>(m.size()));
  for (const auto& c : g.covariances) {
    detail::put_f64_array(out, c.data(), static_cast<std::size_t>(c.size()));
  }
}

GmmModel read_model(std::istream& in) {
  const std::uint64_t k = detail::get_u64(in);
  const std::uint64_t d = detail::get_u64(in);
  if (k > 100000 || d > 100000 || (k == 0) != (d == 0)) {
    throw ParseError("mixture header out of range");
  }
  GmmModel g;
  g.weights.resize(k);
  for (auto& w : g.weights) w = detail::get_f64(in);
  const auto di = static_cast<Index>(d);
  for (std::uint64_t i = 0; i < k; ++i) {
    Eigen::VectorXd m(di);
    detail::get_f64_array(in, m.data(), d);
    g.means.push_back(std::move(m));
  }
  for (std::uint64_t i = 0; i < k; ++i) {
    Eigen::MatrixXd c(di, di);
    detail::get_f64_array(in, c.data(), d * d);
    g.covariances.push_back(std::move(c));
  }
  try {
    g.validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
  return g;
}

}  // namespace

void write_gmm_pair(const GmmModel& shape_gmm, const GmmModel& pose_gmm,
                    std::ostream& out) {
  out.write(kGmmMagic, sizeof kGmmMagic);
  detail::put_u32(out, kGmmFormatVersion);
  write_model(shape_gmm, out);
  write_model(pose_gmm, out);
  if (!out) throw Error("failed to write mixture file");
}

std::pair<GmmModel, GmmModel> read_gmm_pair(std::istream& in) {
  char magic[8];
  detail::get_bytes(in, magic, sizeof magic);
  if (std::memcmp(magic, kGmmMagic, sizeof magic) != 0) {
    throw ParseError("not a mixture file (bad magic)");
  }
  const std::uint32_t version = detail::get_u32(in);
  if (version != kGmmFormatVersion) {
    throw ParseError("unsupported mixture format version " + std::to_string(version));
  }
  GmmModel shape = read_model(in);
  GmmModel pose = read_model(in);
  return {std::move(shape), std::move(pose)};
}

void save_gmm_pair(const GmmModel& shape_gmm, const GmmModel& pose_gmm,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_gmm_pair(shape_gmm, pose_gmm, out);
}

std::pair<GmmModel, GmmModel> load_gmm_pair(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("mixture file not found: " + path.string());
  try {
    return read_gmm_pair(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace lshape
