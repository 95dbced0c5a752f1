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

#include "lshape_cli/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "lshape/error.hpp"

namespace lshape::cli {

namespace pt = boost::property_tree;

namespace {

std::vector<double> parse_list(const std::string& text, const std::string& key) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    for (char& ch : tok) {
      if (ch == ',') ch = ' ';
    }
    std::istringstream inner(tok);
    double v;
    while (inner >> v) out.push_back(v);
    if (!inner.eof()) throw ParseError("bad number in " + key + ": " + tok);
  }
  return out;
}

std::string format_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += fmt::format("{:.17g}", v[i]);
  }
  return s;
}

bool parse_bool(const std::string& s, const std::string& key) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ParseError("expected a boolean for " + key + ", got '" + s + "'");
}

template <class T>
T parse_number(const std::string& s, const std::string& key) {
  std::istringstream in(s);
  T v;
  in >> v;
  if (in.fail() || !(in >> std::ws).eof()) {
    throw ParseError("expected a number for " + key + ", got '" + s + "'");
  }
  return v;
}

std::filesystem::path resolve(const std::string& s, const std::filesystem::path& base) {
  std::filesystem::path p(s);
  if (p.is_relative() && !base.empty()) p = base / p;
  return p.lexically_normal();
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "metric.a0", "metric.a1", "metric.b1", "metric.c1", "metric.d1", "metric.a2",
      "schedule.sigmas", "schedule.lambdas",
      "solver.steps", "solver.ivp_steps", "solver.max_iterations",
      "solver.gradient_tolerance", "solver.function_tolerance", "solver.memory",
      "solver.max_line_search", "solver.ivp_tolerance", "solver.ivp_max_iterations",
      "basis.path", "basis.shape_components", "basis.pose_components",
      "basis.geodesic_steps", "basis.center_shape", "basis.center_pose",
      "generation.model", "generation.shape_components",
      "generation.pose_components", "generation.em_iterations",
      "io.seed", "io.output_dir", "io.normalize", "io.mesh_format"};
  return keys;
}

}  // namespace

void RunConfig::validate() const {
  metric.validate();
  schedule.validate();
  optimizer.validate();
  if (steps < 1) throw InvalidArgument("solver.steps must be >= 1");
  if (ivp_steps < 2) throw InvalidArgument("solver.ivp_steps must be >= 2");
  if (!(ivp.tolerance > 0) || ivp.max_iterations < 1) {
    throw InvalidArgument("invalid IVP tolerance or iteration budget");
  }
  if (shape_components < 0 || pose_components < 0 ||
      shape_components + pose_components < 1) {
    throw InvalidArgument("basis needs shape_components + pose_components >= 1");
  }
  if (geodesic_steps < 1) throw InvalidArgument("basis.geodesic_steps must be >= 1");
  if (gmm_shape_components < 1 || gmm_pose_components < 1 || em_iterations < 1) {
    throw InvalidArgument("mixture component counts and em_iterations must be >= 1");
  }
  if (mesh_format != "obj" && mesh_format != "ply") {
    throw InvalidArgument("io.mesh_format must be obj or ply");
  }
}

RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ParseError("config: key '" + section + "' outside a section");
    for (const auto& [key, value] : body) {
      if (!known_keys().count(section + "." + key)) {
        throw ParseError("config: unknown key " + section + "." + key);
      }
    }
  }
  RunConfig c;
  auto get = [&](const char* key) { return tree.get_optional<std::string>(key); };
  auto num = [&](const char* key, auto& field) {
    if (auto v = get(key)) field = parse_number<std::decay_t<decltype(field)>>(*v, key);
  };
  num("metric.a0", c.metric.a0);
  num("metric.a1", c.metric.a1);
  num("metric.b1", c.metric.b1);
  num("metric.c1", c.metric.c1);
  num("metric.d1", c.metric.d1);
  num("metric.a2", c.metric.a2);

  const auto sig = get("schedule.sigmas");
  const auto lam = get("schedule.lambdas");
  if (sig || lam) {
    if (!sig || !lam) throw ParseError("config: schedule needs both sigmas and lambdas");
    const auto s = parse_list(*sig, "schedule.sigmas");
    const auto l = parse_list(*lam, "schedule.lambdas");
    if (s.size() != l.size()) {
      throw ParseError("config: schedule sigmas and lambdas differ in length");
    }
    c.schedule.stages.clear();
    for (std::size_t i = 0; i < s.size(); ++i) c.schedule.stages.push_back({s[i], l[i]});
  }

  num("solver.steps", c.steps);
  num("solver.ivp_steps", c.ivp_steps);
  num("solver.max_iterations", c.optimizer.max_iterations);
  num("solver.gradient_tolerance", c.optimizer.gradient_tolerance);
  num("solver.function_tolerance", c.optimizer.function_tolerance);
  num("solver.memory", c.optimizer.memory);
  num("solver.max_line_search", c.optimizer.max_line_search);
  num("solver.ivp_tolerance", c.ivp.tolerance);
  num("solver.ivp_max_iterations", c.ivp.max_iterations);

  if (auto v = get("basis.path")) c.basis_path = resolve(*v, base_dir);
  num("basis.shape_components", c.shape_components);
  num("basis.pose_components", c.pose_components);
  num("basis.geodesic_steps", c.geodesic_steps);
  if (auto v = get("basis.center_shape")) c.center_shape = parse_bool(*v, "basis.center_shape");
  if (auto v = get("basis.center_pose")) c.center_pose = parse_bool(*v, "basis.center_pose");

  if (auto v = get("generation.model")) c.gmm_path = resolve(*v, base_dir);
  num("generation.shape_components", c.gmm_shape_components);
  num("generation.pose_components", c.gmm_pose_components);
  num("generation.em_iterations", c.em_iterations);

  num("io.seed", c.seed);
  if (auto v = get("io.output_dir")) c.output_dir = resolve(*v, base_dir);
  if (auto v = get("io.normalize")) c.normalize = parse_bool(*v, "io.normalize");
  if (auto v = get("io.mesh_format")) c.mesh_format = *v;

  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("config not found: " + path.string());
  return parse_config(in, path.parent_path());
}

void write_config(const RunConfig& c, std::ostream& out) {
  auto abs = [](const std::filesystem::path& p) {
    return std::filesystem::absolute(p).lexically_normal().string();
  };
  std::vector<double> s, l;
  for (const auto& st : c.schedule.stages) {
    s.push_back(st.sigma);
    l.push_back(st.lambda);
  }
  out << "[metric]\n"
      << fmt::format("a0 = {:.17g}\na1 = {:.17g}\nb1 = {:.17g}\nc1 = {:.17g}\nd1 = {:.17g}\na2 = {:.17g}\n",
                     c.metric.a0, c.metric.a1, c.metric.b1, c.metric.c1, c.metric.d1, c.metric.a2)
      << "\n[schedule]\n"
      << "sigmas = " << format_list(s) << "\n"
      << "lambdas = " << format_list(l) << "\n"
      << "\n[solver]\n"
      << "steps = " << c.steps << "\n"
      << "ivp_steps = " << c.ivp_steps << "\n"
      << "max_iterations = " << c.optimizer.max_iterations << "\n"
      << fmt::format("gradient_tolerance = {:.17g}\n", c.optimizer.gradient_tolerance)
      << fmt::format("function_tolerance = {:.17g}\n", c.optimizer.function_tolerance)
      << "memory = " << c.optimizer.memory << "\n"
      << "max_line_search = " << c.optimizer.max_line_search << "\n"
      << fmt::format("ivp_tolerance = {:.17g}\n", c.ivp.tolerance)
      << "ivp_max_iterations = " << c.ivp.max_iterations << "\n"
      << "\n[basis]\n"
      << "path = " << abs(c.basis_path) << "\n"
      << "shape_components = " << c.shape_components << "\n"
      << "pose_components = " << c.pose_components << "\n"
      << "geodesic_steps = " << c.geodesic_steps << "\n"
      << "center_shape = " << (c.center_shape ? "true" : "false") << "\n"
      << "center_pose = " << (c.center_pose ? "true" : "false") << "\n"
      << "\n[generation]\n"
      << "model = " << abs(c.gmm_path) << "\n"
      << "shape_components = " << c.gmm_shape_components << "\n"
      << "pose_components = " << c.gmm_pose_components << "\n"
      << "em_iterations = " << c.em_iterations << "\n"
      << "\n[io]\n"
      << "seed = " << c.seed << "\n"
      << "output_dir = " << abs(c.output_dir) << "\n"
      << "normalize = " << (c.normalize ? "true" : "false") << "\n"
      << "mesh_format = " << c.mesh_format << "\n";
}

void save_config(const RunConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_config(cfg, out);
}

}  // namespace lshape::cli
