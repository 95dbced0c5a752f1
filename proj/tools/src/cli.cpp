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

#include "lshape_cli/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lshape/basis_builder.hpp"
#include "lshape/basis_io.hpp"
#include "lshape/error.hpp"
#include "lshape/evaluation.hpp"
#include "lshape/generation.hpp"
#include "lshape/latent.hpp"
#include "lshape/mesh_io.hpp"
#include "lshape/shapes.hpp"
#include "lshape/solvers.hpp"
#include "lshape/varifold.hpp"
#include "lshape_cli/config.hpp"

namespace lshape::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string number(double v) {
  std::string s = fmt::format("{:.17g}", v);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Shared state of one invocation.
struct Context {
  RunConfig cfg;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string output_dir;
  std::string basis_override;
  std::string model_override;
  int threads = 0;
  std::string command;
  std::vector<std::string> args;
  json log = json::object();
  std::vector<std::string> outputs;

  fs::path out(const std::string& name) {
    const fs::path p = cfg.output_dir / name;
    outputs.push_back(p.string());
    return p;
  }
  std::string ext() const { return cfg.mesh_format; }
};

// A bad input file is a usage error even when the mesh reader reports a
// degenerate face.
TriangleMesh read_input_mesh(const fs::path& path) {
  try {
    return load_mesh(path);
  } catch (const DegenerateFaceError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

TriangleMesh load_input(const Context& ctx, const fs::path& path, double* scale = nullptr) {
  TriangleMesh m = read_input_mesh(path);
  if (!ctx.cfg.normalize) {
    if (scale) *scale = 1.0;
    return m;
  }
  return shapes::normalize_to_unit_diameter(m, scale);
}

void save_output_mesh(Context& ctx, const TriangleMesh& m, const std::string& stem) {
  save_mesh(m, ctx.out(stem + "." + ctx.ext()));
}

LatentBasis load_ctx_basis(const Context& ctx) {
  const fs::path p = ctx.cfg.basis_path;
  if (!fs::exists(p)) throw ParseError("basis not found: " + p.string());
  return load_basis(p);
}

json report_json(const SolveReport& r) {
  json j;
  j["objective"] = r.objective;
  j["energy"] = r.energy;
  j["gradient_norm"] = r.gradient_norm;
  j["termination"] = std::string(to_string(r.reason));
  j["stage_iterations"] = r.stage_iterations;
  j["discrepancies"] = r.discrepancies;
  return j;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  if (!out) throw Error("cannot write " + p.string());
  out << text;
}

LatentSolution register_mesh(const Context& ctx, const LatentBasis& basis,
                             const TriangleMesh& target) {
  return retrieve_latent(basis, target, ctx.cfg.metric, ctx.cfg.schedule,
                         ctx.cfg.steps, ctx.cfg.optimizer);
}

// ------------------------------------------------------------ commands

int cmd_register(Context& ctx, const std::string& target_path) {
  const LatentBasis basis = load_ctx_basis(ctx);
  double scale = 1.0;
  const TriangleMesh target = load_input(ctx, target_path, &scale);
  const LatentSolution sol = register_mesh(ctx, basis, target);
  write_vectors(ctx.out("code.txt"), {sol.path.back()});
  write_vectors(ctx.out("path_codes.txt"), sol.path);
  save_output_mesh(ctx, basis.decode(sol.path.back()), "reconstruction");
  ctx.log["input_scale"] = scale;
  ctx.log["report"] = report_json(sol.report);
  fmt::print("final varifold discrepancy {}\n", number(sol.report.discrepancies.front()));
  fmt::print("termination {}\n", to_string(sol.report.reason));
  return kSuccess;
}

int cmd_interpolate(Context& ctx, const std::string& source, const std::string& target) {
  const LatentBasis basis = load_ctx_basis(ctx);
  const TriangleMesh q0 = load_input(ctx, source);
  const TriangleMesh q1 = load_input(ctx, target);
  const LatentSolution sol = relaxed_geodesic(basis, q0, q1, ctx.cfg.steps, ctx.cfg.metric,
                                              ctx.cfg.schedule, ctx.cfg.optimizer);
  for (std::size_t t = 0; t < sol.path.size(); ++t) {
    save_output_mesh(ctx, basis.decode(sol.path[t]), fmt::format("frame_{:03d}", t));
  }
  write_vectors(ctx.out("path_codes.txt"), sol.path);
  write_text(ctx.out("interpolation.csv"),
             "energy,discrepancy_source,discrepancy_target\n" + number(sol.report.energy) + "," +
                 number(sol.report.discrepancies[0]) + "," +
                 number(sol.report.discrepancies[1]) + "\n");
  ctx.log["report"] = report_json(sol.report);
  fmt::print("energy {}\n", number(sol.report.energy));
  return kSuccess;
}

int cmd_extrapolate(Context& ctx, const std::vector<std::string>& meshes,
                    const std::string& code_file, const std::string& velocity_file,
                    const std::string& pair_file) {
  const LatentBasis basis = load_ctx_basis(ctx);
  const int n = ctx.cfg.ivp_steps;
  LatentCode alpha0;
  Eigen::VectorXd beta;
  if (!pair_file.empty()) {
    const auto rows = read_vectors(pair_file);
    if (rows.size() != 2) throw ParseError(pair_file + ": expected two lines (code, velocity)");
    alpha0 = rows[0];
    beta = rows[1];
  } else if (!code_file.empty() || !velocity_file.empty()) {
    if (code_file.empty() || velocity_file.empty()) {
      throw InvalidArgument("--code and --velocity must be given together");
    }
    const auto a = read_vectors(code_file);
    const auto b = read_vectors(velocity_file);
    if (a.size() != 1 || b.size() != 1) throw ParseError("code and velocity files hold one vector each");
    alpha0 = a[0];
    beta = b[0];
  } else {
    if (meshes.size() != 2) throw InvalidArgument("extrapolate needs two meshes or a code and velocity");
    const LatentSolution s0 = register_mesh(ctx, basis, load_input(ctx, meshes[0]));
    const LatentSolution s1 = register_mesh(ctx, basis, load_input(ctx, meshes[1]));
    alpha0 = s0.path.back();
    // the second knot of the shot path lands on the second mesh's code
    beta = static_cast<double>(n) * (s1.path.back() - alpha0);
    ctx.log["registration"] = {report_json(s0.report), report_json(s1.report)};
  }
  if (alpha0.size() != basis.dimension() || beta.size() != basis.dimension()) {
    throw InvalidArgument("code and velocity must have length P = " +
                          std::to_string(basis.dimension()));
  }
  LatentPath path;
  try {
    path = geodesic_ivp(basis, alpha0, beta, n, ctx.cfg.metric, ctx.cfg.ivp);
  } catch (const NumericalFailure& e) {
    if (e.step()) ctx.log["failed_step"] = *e.step();
    throw;
  }
  for (std::size_t k = 0; k < path.size(); ++k) {
    save_output_mesh(ctx, basis.decode(path[k]), fmt::format("frame_{:03d}", k));
  }
  write_vectors(ctx.out("path_codes.txt"), path);
  write_vectors(ctx.out("velocity.txt"), {beta});
  return kSuccess;
}

int cmd_transfer(Context& ctx, const std::vector<std::string>& frames,
                 const std::string& target_path) {
  const LatentBasis basis = load_ctx_basis(ctx);
  const LatentSolution tgt = register_mesh(ctx, basis, load_input(ctx, target_path));
  LatentPath codes;
  std::vector<std::size_t> ok;
  json per_frame = json::array();
  int failed = 0;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    try {
      const LatentSolution s = register_mesh(ctx, basis, load_input(ctx, frames[i]));
      codes.push_back(s.path.back());
      ok.push_back(i);
      per_frame.push_back({{"frame", frames[i]}, {"status", "ok"}});
    } catch (const Error& e) {
      ++failed;
      spdlog::error("frame {}: {}", frames[i], e.what());
      per_frame.push_back({{"frame", frames[i]}, {"status", e.what()}});
    }
  }
  const LatentPath moved = substitute_shape_block(codes, tgt.path.back(), basis.shape_count());
  for (std::size_t j = 0; j < moved.size(); ++j) {
    try {
      save_output_mesh(ctx, basis.decode(moved[j]), fmt::format("transfer_{:03d}", ok[j]));
    } catch (const DegenerateFaceError& e) {
      ++failed;
      spdlog::error("frame {}: {}", frames[ok[j]], e.what());
      per_frame[ok[j]]["status"] = e.what();
    }
  }
  write_vectors(ctx.out("codes_in.txt"), codes);
  write_vectors(ctx.out("codes_out.txt"), moved);
  write_vectors(ctx.out("target_code.txt"), {tgt.path.back()});
  ctx.log["frames"] = per_frame;
  return failed ? kNumericalFailure : kSuccess;
}

int cmd_generate(Context& ctx, int count) {
  const LatentBasis basis = load_ctx_basis(ctx);
  if (!fs::exists(ctx.cfg.gmm_path)) {
    throw ParseError("mixture model not found: " + ctx.cfg.gmm_path.string());
  }
  const auto [shape_gmm, pose_gmm] = load_gmm_pair(ctx.cfg.gmm_path);
  std::vector<Eigen::VectorXd> velocities;
  json shots = json::array();
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = splitmix64(ctx.cfg.seed + static_cast<std::uint64_t>(i));
    const GenerationResult g = generate_shape(basis, shape_gmm, pose_gmm, ctx.cfg.ivp_steps,
                                              ctx.cfg.metric, ctx.cfg.ivp, s);
    save_output_mesh(ctx, g.mesh, fmt::format("generated_{:03d}", i));
    velocities.push_back(g.velocity);
    shots.push_back({{"seed", s}, {"halvings", g.halvings}});
  }
  write_vectors(ctx.out("velocities.txt"), velocities);
  ctx.log["shots"] = shots;
  return kSuccess;
}

int cmd_fit_gmm(Context& ctx, const std::vector<std::string>& meshes,
                const std::string& velocity_file) {
  const LatentBasis basis = load_ctx_basis(ctx);
  std::vector<Eigen::VectorXd> v;
  if (!velocity_file.empty()) {
    v = read_vectors(velocity_file);
  } else {
    for (const auto& m : meshes) {
      const LatentSolution s = register_mesh(ctx, basis, load_input(ctx, m));
      v.push_back(static_cast<double>(ctx.cfg.steps) * (s.path[1] - s.path[0]));
    }
    write_vectors(ctx.out("velocities.txt"), v);
  }
  if (v.empty()) throw InvalidArgument("fit-gmm needs meshes or --velocities");
  const Index p = basis.dimension(), m = basis.shape_count();
  Eigen::MatrixXd x(static_cast<Index>(v.size()), p);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].size() != p) throw InvalidArgument("velocity length does not match basis");
    x.row(static_cast<Index>(i)) = v[i].transpose();
  }
  auto fit_block = [&](Index first, Index size, int k, std::uint64_t seed) {
    if (size == 0) return GmmModel{};
    const int kk = std::min<int>(k, static_cast<int>(x.rows()));
    if (kk < k) spdlog::warn("only {} samples; fitting {} components instead of {}", x.rows(), kk, k);
    GmmFitOptions o;
    o.components = kk;
    o.seed = seed;
    o.max_iterations = ctx.cfg.em_iterations;
    return fit_gmm(x.middleCols(first, size), o);
  };
  const GmmModel shape = fit_block(0, m, ctx.cfg.gmm_shape_components, splitmix64(ctx.cfg.seed));
  const GmmModel pose = fit_block(m, p - m, ctx.cfg.gmm_pose_components, splitmix64(ctx.cfg.seed + 1));
  const fs::path out = ctx.out("gmm.lsg");
  save_gmm_pair(shape, pose, out);
  fmt::print("wrote {}\n", out.string());
  return kSuccess;
}

int cmd_build_basis(Context& ctx, const std::string& manifest_path) {
  const auto entries = read_manifest(manifest_path);
  if (entries.empty()) throw InvalidArgument("manifest is empty");
  std::vector<TriangleMesh> meshes;
  for (const auto& e : entries) meshes.push_back(read_input_mesh(e.path));
  // one common scale (the template's) keeps relative sizes between meshes
  double scale = 1.0;
  if (ctx.cfg.normalize) {
    shapes::normalize_to_unit_diameter(meshes.front(), &scale);
    for (auto& m : meshes) m = m.with_vertices(m.vertices() * scale);
  }
  const ManifestEntry& tmpl = entries.front();
  std::vector<TriangleMesh> shape_set{meshes.front()};
  std::vector<std::string> shape_names{tmpl.path.string()};
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].pose == tmpl.pose && entries[i].identity != tmpl.identity) {
      shape_set.push_back(meshes[i]);
      shape_names.push_back(entries[i].path.string());
    }
  }
  std::map<std::string, std::vector<TriangleMesh>> seqs;
  std::vector<std::string> seq_order;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& s = entries[i].sequence;
    if (s == "-" || s.empty()) continue;
    if (!seqs.count(s)) seq_order.push_back(s);
    seqs[s].push_back(meshes[i]);
  }
  std::vector<std::vector<TriangleMesh>> sequences;
  for (const auto& s : seq_order) sequences.push_back(seqs[s]);

  const int m = ctx.cfg.shape_components, n = ctx.cfg.pose_components;
  PCAResult shape_pca, pose_pca;
  if (m > 0) {
    const auto samples = shape_tangents(shape_set, 0, ctx.cfg.metric, ctx.cfg.geodesic_steps,
                                        ctx.cfg.optimizer, shape_names);
    shape_pca = pca(samples, m, ctx.cfg.center_shape);
    ctx.log["shape_samples"] = samples.size();
  }
  if (n > 0) {
    const auto samples = pose_tangents(sequences, seq_order);
    pose_pca = pca(samples, n, ctx.cfg.center_pose);
    ctx.log["pose_samples"] = samples.size();
  }
  const LatentBasis basis = assemble_basis(meshes.front(), shape_pca, pose_pca, m, n);
  const fs::path out = ctx.out("basis.lsb");
  save_basis(basis, out);
  ctx.log["dimension"] = basis.dimension();
  ctx.log["template_scale"] = scale;
  fmt::print("wrote {} (P = {})\n", out.string(), basis.dimension());
  return kSuccess;
}

int cmd_distance(Context& ctx, const std::string& a, const std::string& b,
                 std::optional<double> sigma) {
  const double s = sigma.value_or(ctx.cfg.schedule.stages.back().sigma);
  const double d = varifold_sqdist(load_input(ctx, a), load_input(ctx, b), VarifoldConfig{s});
  ctx.log["sigma"] = s;
  ctx.log["sqdist"] = d;
  fmt::print("{}\n", number(d));
  return kSuccess;
}

int cmd_evaluate(Context& ctx, const std::vector<std::string>& meshes,
                 const std::string& pairs_file, std::optional<double> sigma) {
  std::vector<std::pair<std::string, std::string>> pairs;
  if (!pairs_file.empty()) {
    std::ifstream in(pairs_file);
    if (!in) throw ParseError("pairs file not found: " + pairs_file);
    const fs::path base = fs::path(pairs_file).parent_path();
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      std::string a, b;
      if (!(ls >> a) || a[0] == '#') continue;
      if (!(ls >> b)) throw ParseError(pairs_file + ": expected two paths per line");
      auto res = [&](const std::string& s) {
        const fs::path p(s);
        return (p.is_relative() ? base / p : p).string();
      };
      pairs.emplace_back(res(a), res(b));
    }
  } else {
    if (meshes.size() != 2) throw InvalidArgument("evaluate needs two meshes or --pairs");
    pairs.emplace_back(meshes[0], meshes[1]);
  }
  const std::vector<std::string> cols = {"hausdorff", "chamfer", "varifold_relative",
                                         "registered_mse", "geodesic_error"};
  std::string csv = "source,reference";
  for (const auto& c : cols) csv += "," + c;
  csv += "\n";
  for (const auto& [a, b] : pairs) {
    const EvalReport r = evaluate_pair(load_input(ctx, a), load_input(ctx, b), sigma);
    csv += a + "," + b;
    for (const auto& c : cols) {
      const auto v = r.get(c);
      csv += "," + (v ? number(*v) : std::string());
    }
    csv += "\n";
  }
  write_text(ctx.out("evaluation.csv"), csv);
  std::fputs(csv.c_str(), stdout);
  return kSuccess;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const NumericalFailure*>(&e) || dynamic_cast<const DegenerateFaceError*>(&e)) {
    return kNumericalFailure;
  }
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const InvalidArgument*>(&e) ||
      dynamic_cast<const TopologyMismatch*>(&e) || dynamic_cast<const fs::filesystem_error*>(&e)) {
    return kUsageError;
  }
  return kNumericalFailure;
}

}  // namespace

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

int run(const std::vector<std::string>& args) {
  Context ctx;
  CLI::App app{"Basis-restricted elastic shape analysis on triangle meshes", "lshape"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.add_option("--config", ctx.config_path, "INI run configuration");
  app.add_option("--threads", ctx.threads, "worker threads (0 = runtime default)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--seed", ctx.seed, "seed for all randomness (overrides io.seed)");
  app.add_option("--output-dir", ctx.output_dir, "output directory (overrides io.output_dir)");
  app.add_option("--basis", ctx.basis_override, "basis file (overrides basis.path)");
  app.add_option("--model", ctx.model_override, "mixture model file (overrides generation.model)");

  std::string target, source, manifest, code_file, velocity_file, pair_file, pairs_file,
      velocities_file;
  std::vector<std::string> meshes;
  std::optional<double> sigma;
  int count = 1;

  auto* reg = app.add_subcommand("register", "retrieve the latent code of a mesh");
  reg->add_option("target", target, "target mesh")->required();
  auto* interp = app.add_subcommand("interpolate", "relaxed geodesic between two meshes");
  interp->add_option("source", source)->required();
  interp->add_option("target", target)->required();
  auto* extra = app.add_subcommand("extrapolate", "shoot a geodesic from a code and velocity");
  extra->add_option("meshes", meshes, "two consecutive meshes to register first");
  extra->add_option("--code", code_file, "start code file");
  extra->add_option("--velocity", velocity_file, "velocity file");
  extra->add_option("--pair", pair_file, "file with the start code and the velocity");
  auto* transfer = app.add_subcommand("transfer", "move a motion onto another identity");
  transfer->add_option("frames", meshes, "sequence frames")->required();
  transfer->add_option("--target", target, "target identity mesh")->required();
  auto* gen = app.add_subcommand("generate", "random shapes from a fitted mixture model");
  gen->add_option("--count", count, "number of shapes")->check(CLI::PositiveNumber);
  auto* fit = app.add_subcommand("fit-gmm", "fit the generation mixture models");
  fit->add_option("meshes", meshes, "training meshes to register");
  fit->add_option("--velocities", velocities_file, "precomputed initial velocities");
  auto* build = app.add_subcommand("build-basis", "build a basis from a training manifest");
  build->add_option("manifest", manifest, "manifest: path identity pose sequence")->required();
  auto* dist = app.add_subcommand("distance", "squared varifold distance");
  dist->add_option("a", source)->required();
  dist->add_option("b", target)->required();
  dist->add_option("--sigma", sigma, "kernel scale (default: last schedule stage)");
  auto* eval = app.add_subcommand("evaluate", "remeshing-tolerant and registered errors");
  eval->add_option("meshes", meshes, "prediction and reference");
  eval->add_option("--pairs", pairs_file, "file with one 'prediction reference' pair per line");
  eval->add_option("--sigma", sigma, "also report relative varifold error at this scale");
  for (auto* sub : {reg, interp, extra, transfer, gen, fit, build, dist, eval}) sub->fallthrough();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e) == 0 ? kSuccess : kUsageError;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  ctx.command = app.get_subcommands().front()->get_name();
  ctx.args = args;
  try {
    if (!ctx.config_path.empty()) ctx.cfg = load_config(ctx.config_path);
    if (ctx.seed) ctx.cfg.seed = *ctx.seed;
    if (!ctx.output_dir.empty()) ctx.cfg.output_dir = ctx.output_dir;
    if (!ctx.basis_override.empty()) ctx.cfg.basis_path = ctx.basis_override;
    if (!ctx.model_override.empty()) ctx.cfg.gmm_path = ctx.model_override;
    ctx.cfg.validate();
#ifdef _OPENMP
    if (ctx.threads > 0) omp_set_num_threads(ctx.threads);
#endif
    fs::create_directories(ctx.cfg.output_dir);
    save_config(ctx.cfg, ctx.out("effective_config.ini"));

    int code = kSuccess;
    if (reg->parsed()) code = cmd_register(ctx, target);
    else if (interp->parsed()) code = cmd_interpolate(ctx, source, target);
    else if (extra->parsed()) code = cmd_extrapolate(ctx, meshes, code_file, velocity_file, pair_file);
    else if (transfer->parsed()) code = cmd_transfer(ctx, meshes, target);
    else if (gen->parsed()) code = cmd_generate(ctx, count);
    else if (fit->parsed()) code = cmd_fit_gmm(ctx, meshes, velocities_file);
    else if (build->parsed()) code = cmd_build_basis(ctx, manifest);
    else if (dist->parsed()) code = cmd_distance(ctx, source, target, sigma);
    else if (eval->parsed()) code = cmd_evaluate(ctx, meshes, pairs_file, sigma);

    json log;
    log["version"] = kVersion;
    log["command"] = ctx.command;
    log["arguments"] = ctx.args;
    log["seed"] = ctx.cfg.seed;
    log["threads"] = ctx.threads;
    log["exit_code"] = code;
    log["outputs"] = ctx.outputs;
    log["results"] = ctx.log;
    write_text(ctx.cfg.output_dir / "run_log.json", log.dump(2) + "\n");
    return code;
  } catch (const std::exception& e) {
    const int code = exit_code_for(e);
    std::fprintf(stderr, "lshape %s: %s\n", ctx.command.c_str(), e.what());
    try {
      if (fs::is_directory(ctx.cfg.output_dir)) {
        json log;
        log["version"] = kVersion;
        log["command"] = ctx.command;
        log["arguments"] = ctx.args;
        log["seed"] = ctx.cfg.seed;
        log["exit_code"] = code;
        log["error"] = e.what();
        log["results"] = ctx.log;
        write_text(ctx.cfg.output_dir / "run_log.json", log.dump(2) + "\n");
      }
    } catch (...) {
    }
    return code;
  }
}

// ------------------------------------------------------------ text formats

void write_vectors(const fs::path& path, const std::vector<Eigen::VectorXd>& rows) {
  std::string text;
  for (const auto& r : rows) {
    for (Index i = 0; i < r.size(); ++i) {
      if (i) text += ' ';
      text += fmt::format("{:.17g}", r[i]);
    }
    text += '\n';
  }
  write_text(path, text);
}

std::vector<Eigen::VectorXd> read_vectors(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("vector file not found: " + path.string());
  std::vector<Eigen::VectorXd> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::vector<double> vals;
    std::string tok;
    while (ls >> tok) {
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0') {
        throw ParseError(fmt::format("{}:{}: bad number '{}'", path.string(), lineno, tok));
      }
      vals.push_back(v);
    }
    if (vals.empty()) continue;
    out.emplace_back(Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Index>(vals.size())));
  }
  return out;
}

std::vector<ManifestEntry> read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("manifest not found: " + path.string());
  std::vector<ManifestEntry> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    ManifestEntry e;
    std::string p;
    if (!(ls >> p) || p[0] == '#') continue;
    if (!(ls >> e.identity >> e.pose)) {
      throw ParseError(fmt::format("{}:{}: expected 'path identity pose [sequence]'",
                                   path.string(), lineno));
    }
    if (!(ls >> e.sequence)) e.sequence = "-";
    e.path = fs::path(p).is_relative() ? path.parent_path() / p : fs::path(p);
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace lshape::cli
