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

#include "lshape/mesh_io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "lshape/error.hpp"

namespace lshape {

namespace {

static_assert(std::endian::native == std::endian::little,
              "binary PLY I/O assumes a little-endian host");

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

TriangleMesh build_mesh(const std::vector<double>& coords,
                        const std::vector<int>& indices) {
  VertexMatrix v(static_cast<Index>(coords.size() / 3), 3);
  std::copy(coords.begin(), coords.end(), v.data());
  FaceMatrix f(static_cast<Index>(indices.size() / 3), 3);
  std::copy(indices.begin(), indices.end(), f.data());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 0 || indices[i] >= v.rows()) {
      throw ParseError("face " + std::to_string(i / 3) + " has out-of-range vertex index " +
                       std::to_string(indices[i]));
    }
  }
  return TriangleMesh(std::move(v), std::move(f));
}

// ---------------------------------------------------------------- OBJ

int parse_obj_index(const std::string& token, std::size_t vertex_count,
                    std::size_t line_no) {
  const std::string head = token.substr(0, token.find('/'));
  long value = 0;
  try {
    std::size_t used = 0;
    value = std::stol(head, &used);
    if (used != head.size()) throw std::invalid_argument(head);
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line_no) +
                     ": bad face index '" + token + "'");
  }
  if (value < 0) value += static_cast<long>(vertex_count) + 1;
  if (value <= 0 || value > std::numeric_limits<int>::max()) {
    throw ParseError("line " + std::to_string(line_no) +
                     ": face index out of range '" + token + "'");
  }
  return static_cast<int>(value - 1);
}

// ---------------------------------------------------------------- PLY

enum class PlyType { i8, u8, i16, u16, i32, u32, f32, f64 };

PlyType parse_ply_type(const std::string& name) {
  const std::string t = lower(name);
  if (t == "char" || t == "int8") return PlyType::i8;
  if (t == "uchar" || t == "uint8") return PlyType::u8;
  if (t == "short" || t == "int16") return PlyType::i16;
  if (t == "ushort" || t == "uint16") return PlyType::u16;
  if (t == "int" || t == "int32") return PlyType::i32;
  if (t == "uint" || t == "uint32") return PlyType::u32;
  if (t == "float" || t == "float32") return PlyType::f32;
  if (t == "double" || t == "float64") return PlyType::f64;
  throw ParseError("unknown PLY type '" + name + "'");
}

struct PlyProperty {
  std::string name;
  PlyType type = PlyType::f32;
  bool is_list = false;
  PlyType count_type = PlyType::u8;
};

struct PlyElement {
  std::string name;
  std::size_t count = 0;
  std::vector<PlyProperty> properties;
};

class PlyReader {
 public:
  PlyReader(std::istream& in, bool binary) : in_(in), binary_(binary) {}

  double read(PlyType type) {
    if (!binary_) {
      std::string token;
      if (!(in_ >> token)) throw ParseError("unexpected end of PLY data");
      try {
        return std::stod(token);
      } catch (const std::exception&) {
        throw ParseError("bad PLY value '" + token + "'");
      }
    }
    switch (type) {
      case PlyType::i8: return raw<std::int8_t>();
      case PlyType::u8: return raw<std::uint8_t>();
      case PlyType::i16: return raw<std::int16_t>();
      case PlyType::u16: return raw<std::uint16_t>();
      case PlyType::i32: return raw<std::int32_t>();
      case PlyType::u32: return raw<std::uint32_t>();
      case PlyType::f32: return raw<float>();
      case PlyType::f64: return raw<double>();
    }
    return 0.0;
  }

 private:
  template <class T>
  double raw() {
    T value;
    if (!in_.read(reinterpret_cast<char*>(&value), sizeof(T))) {
      throw ParseError("unexpected end of binary PLY data");
    }
    return static_cast<double>(value);
  }

  std::istream& in_;
  bool binary_;
};

}  // namespace

MeshFormat format_from_extension(const std::filesystem::path& path) {
  const std::string ext = lower(path.extension().string());
  if (ext == ".obj") return MeshFormat::obj;
  if (ext == ".ply") return MeshFormat::ply;
  throw InvalidArgument("unrecognised mesh extension '" + ext + "' for " +
                        path.string());
}

TriangleMesh read_obj(std::istream& in) {
  std::vector<double> coords;
  std::vector<int> indices;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      double x, y, z;
      if (!(ls >> x >> y >> z)) {
        throw ParseError("line " + std::to_string(line_no) +
                         ": vertex needs three coordinates");
      }
      coords.insert(coords.end(), {x, y, z});
    } else if (tag == "f") {
      std::vector<std::string> tokens;
      for (std::string t; ls >> t;) tokens.push_back(t);
      if (tokens.size() != 3) {
        throw ParseError("line " + std::to_string(line_no) +
                         ": non-triangle face with " +
                         std::to_string(tokens.size()) + " corners");
      }
      for (const auto& t : tokens) {
        indices.push_back(parse_obj_index(t, coords.size() / 3, line_no));
      }
    }
    // vn, vt, o, g, s, usemtl, mtllib, ...: ignored
  }
  return build_mesh(coords, indices);
}

TriangleMesh read_ply(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.substr(0, 3) != "ply") {
    throw ParseError("missing 'ply' magic");
  }
  bool binary = false;
  std::vector<PlyElement> elements;
  bool header_done = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "format") {
      std::string kind;
      ls >> kind;
      if (kind == "ascii") {
        binary = false;
      } else if (kind == "binary_little_endian") {
        binary = true;
      } else {
        throw ParseError("unsupported PLY format '" + kind + "'");
      }
    } else if (tag == "element") {
      PlyElement e;
      ls >> e.name >> e.count;
      if (!ls) throw ParseError("bad PLY element line: " + line);
      elements.push_back(e);
    } else if (tag == "property") {
      if (elements.empty()) throw ParseError("PLY property before element");
      PlyProperty p;
      std::string type;
      ls >> type;
      if (type == "list") {
        std::string ct, it;
        ls >> ct >> it >> p.name;
        p.is_list = true;
        p.count_type = parse_ply_type(ct);
        p.type = parse_ply_type(it);
      } else {
        ls >> p.name;
        p.type = parse_ply_type(type);
      }
      elements.back().properties.push_back(p);
    } else if (tag == "end_header") {
      header_done = true;
      break;
    }
    // comment, obj_info: ignored
  }
  if (!header_done) throw ParseError("PLY header has no end_header");

  PlyReader reader(in, binary);
  std::vector<double> coords;
  std::vector<int> indices;
  for (const PlyElement& e : elements) {
    const bool is_vertex = e.name == "vertex";
    const bool is_face = e.name == "face";
    int xyz[3] = {-1, -1, -1};
    if (is_vertex) {
      for (std::size_t k = 0; k < e.properties.size(); ++k) {
        const auto& n = e.properties[k].name;
        if (n == "x") xyz[0] = static_cast<int>(k);
        if (n == "y") xyz[1] = static_cast<int>(k);
        if (n == "z") xyz[2] = static_cast<int>(k);
      }
      if (xyz[0] < 0 || xyz[1] < 0 || xyz[2] < 0) {
        throw ParseError("PLY vertex element lacks x/y/z");
      }
    }
    for (std::size_t i = 0; i < e.count; ++i) {
      double pos[3] = {0, 0, 0};
      for (std::size_t k = 0; k < e.properties.size(); ++k) {
        const PlyProperty& p = e.properties[k];
        if (p.is_list) {
          const double cnt = reader.read(p.count_type);
          const auto count = static_cast<std::size_t>(cnt);
          const bool indices_prop =
              is_face && (p.name == "vertex_indices" || p.name == "vertex_index");
          if (indices_prop && count != 3) {
            throw ParseError("non-triangle face " + std::to_string(i) +
                             " with " + std::to_string(count) + " corners");
          }
          for (std::size_t c = 0; c < count; ++c) {
            const double value = reader.read(p.type);
            if (indices_prop) indices.push_back(static_cast<int>(value));
          }
        } else {
          const double value = reader.read(p.type);
          if (is_vertex) {
            for (int a = 0; a < 3; ++a) {
              if (xyz[a] == static_cast<int>(k)) pos[a] = value;
            }
          }
        }
      }
      if (is_vertex) coords.insert(coords.end(), {pos[0], pos[1], pos[2]});
    }
  }
  return build_mesh(coords, indices);
}

TriangleMesh load_mesh(const std::filesystem::path& path,
                       std::optional<MeshFormat> format) {
  const MeshFormat fmt = format ? *format : format_from_extension(path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open mesh file " + path.string());
  try {
    return fmt == MeshFormat::obj ? read_obj(in) : read_ply(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_obj(const TriangleMesh& mesh, std::ostream& out) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  const auto& v = mesh.vertices();
  const auto& f = mesh.faces();
  for (Index i = 0; i < v.rows(); ++i) {
    out << "v " << v(i, 0) << ' ' << v(i, 1) << ' ' << v(i, 2) << '\n';
  }
  for (Index i = 0; i < f.rows(); ++i) {
    out << "f " << f(i, 0) + 1 << ' ' << f(i, 1) + 1 << ' ' << f(i, 2) + 1
        << '\n';
  }
}

void write_ply(const TriangleMesh& mesh, std::ostream& out,
               PlyEncoding encoding) {
  const auto& v = mesh.vertices();
  const auto& f = mesh.faces();
  const bool binary = encoding == PlyEncoding::binary_little_endian;
  out << "ply\n"
      << (binary ? "format binary_little_endian 1.0\n" : "format ascii 1.0\n")
      << "element vertex " << v.rows() << "\n"
      << "property float x\nproperty float y\nproperty float z\n"
      << "element face " << f.rows() << "\n"
      << "property list uchar int vertex_indices\n"
      << "end_header\n";
  if (binary) {
    for (Index i = 0; i < v.rows(); ++i) {
      for (int k = 0; k < 3; ++k) {
        const float x = static_cast<float>(v(i, k));
        out.write(reinterpret_cast<const char*>(&x), sizeof x);
      }
    }
    for (Index i = 0; i < f.rows(); ++i) {
      const std::uint8_t three = 3;
      out.write(reinterpret_cast<const char*>(&three), 1);
      for (int k = 0; k < 3; ++k) {
        const std::int32_t idx = f(i, k);
        out.write(reinterpret_cast<const char*>(&idx), sizeof idx);
      }
    }
  } else {
    out << std::setprecision(std::numeric_limits<float>::max_digits10);
    for (Index i = 0; i < v.rows(); ++i) {
      out << static_cast<float>(v(i, 0)) << ' ' << static_cast<float>(v(i, 1))
          << ' ' << static_cast<float>(v(i, 2)) << '\n';
    }
    for (Index i = 0; i < f.rows(); ++i) {
      out << "3 " << f(i, 0) << ' ' << f(i, 1) << ' ' << f(i, 2) << '\n';
    }
  }
}

void save_mesh(const TriangleMesh& mesh, const std::filesystem::path& path,
               std::optional<MeshFormat> format, PlyEncoding encoding) {
  const MeshFormat fmt = format ? *format : format_from_extension(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write mesh file " + path.string());
  if (fmt == MeshFormat::obj) {
    write_obj(mesh, out);
  } else {
    write_ply(mesh, out, encoding);
  }
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace lshape
