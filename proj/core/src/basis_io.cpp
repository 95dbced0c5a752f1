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

#include "lshape/basis_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "binary_io.hpp"
#include "lshape/error.hpp"
#include "lshape/mesh_io.hpp"

namespace lshape {

namespace {

constexpr char kMagic[8] = {'L', 'S', 'B', 'A', 'S', 'I', 'S', '\0'};

}  // namespace

void write_basis(const LatentBasis& basis, std::ostream& out) {
  out.write(kMagic, sizeof kMagic);
  detail::put_u32(out, kBasisFormatVersion);
  std::ostringstream obj;
  write_obj(basis.template_mesh(), obj);
  const std::string text = obj.str();
  detail::put_u64(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  detail::put_u64(out, static_cast<std::uint64_t>(basis.dimension()));
  detail::put_u64(out, static_cast<std::uint64_t>(basis.shape_count()));
  detail::put_u64(out, static_cast<std::uint64_t>(basis.pose_count()));
  detail::put_u64(out, static_cast<std::uint64_t>(basis.template_mesh().vertex_count()));
  const Eigen::MatrixXd& h = basis.fields();
  for (Index j = 0; j < h.cols(); ++j) {
    detail::put_f64_array(out, h.col(j).data(), static_cast<std::size_t>(h.rows()));
  }
  if (!out) throw Error("failed to write basis");
}

LatentBasis read_basis(std::istream& in) {
  char magic[8];
  detail::get_bytes(in, magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw ParseError("not a basis file (bad magic)");
  }
  const std::uint32_t version = detail::get_u32(in);
  if (version != kBasisFormatVersion) {
    throw ParseError("unsupported basis format version " + std::to_string(version));
  }
  const std::uint64_t text_size = detail::get_u64(in);
  if (text_size > (std::uint64_t{1} << 34)) throw ParseError("basis template too large");
  std::string text(text_size, '\0');
  detail::get_bytes(in, text.data(), text.size());
  std::istringstream obj(text);
  TriangleMesh tmpl = read_obj(obj);
  const auto p = static_cast<Index>(detail::get_u64(in));
  const auto m = static_cast<Index>(detail::get_u64(in));
  const auto n = static_cast<Index>(detail::get_u64(in));
  const auto verts = static_cast<Index>(detail::get_u64(in));
  if (m + n != p) throw ParseError("basis block sizes do not add up to P");
  if (verts != tmpl.vertex_count()) {
    throw ParseError("basis vertex count does not match its template");
  }
  if (p <= 0 || p > 100000) throw ParseError("basis dimension out of range");
  Eigen::MatrixXd h(3 * verts, p);
  for (Index j = 0; j < p; ++j) {
    detail::get_f64_array(in, h.col(j).data(), static_cast<std::size_t>(h.rows()));
  }
  return LatentBasis(std::move(tmpl), std::move(h), m);
}

void save_basis(const LatentBasis& basis, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_basis(basis, out);
}

LatentBasis load_basis(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("basis not found: " + path.string());
  try {
    return read_basis(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace lshape
