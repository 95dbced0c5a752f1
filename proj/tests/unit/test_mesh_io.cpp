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

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "lshape/error.hpp"
#include "lshape/mesh_io.hpp"
#include "lshape/shapes.hpp"

namespace {

using namespace lshape;
namespace lt = lshape::testing;

TEST(ReadObj, MinimalTriangle) {
  std::istringstream in("# tri\nv 0 0 0\nv 1 0 0\nv 0 1 0\nvn 0 0 1\nf 1//1 2//1 3//1\n");
  const TriangleMesh m = read_obj(in);
  EXPECT_EQ(m.vertex_count(), 3);
  EXPECT_EQ(m.face_count(), 1);
  EXPECT_EQ(m.faces()(0, 2), 2);
}

TEST(ReadObj, NegativeIndices) {
  std::istringstream in("v 0 0 0\nv 1 0 0\nv 0 1 0\nf -3 -2 -1\n");
  EXPECT_EQ(read_obj(in).faces()(0, 0), 0);
}

TEST(ReadObj, Errors) {
  std::istringstream dup("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 2\n");
  try {
    read_obj(dup);
    FAIL();
  } catch (const DegenerateFaceError& e) {
    EXPECT_NE(std::string(e.what()).find("degenerate face"), std::string::npos);
  }
  std::istringstream quad("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n");
  EXPECT_THROW(read_obj(quad), ParseError);
  std::istringstream range("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 4\n");
  EXPECT_THROW(read_obj(range), ParseError);
  std::istringstream junk("v 0 zero 0\n");
  EXPECT_THROW(read_obj(junk), ParseError);
  std::istringstream flat("v 0 0 0\nv 1 0 0\nv 2 0 0\nf 1 2 3\n");
  EXPECT_THROW(read_obj(flat), DegenerateFaceError);
}

TEST(ReadPly, AsciiWithExtraProperties) {
  std::istringstream in(
      "ply\nformat ascii 1.0\ncomment x\nelement vertex 3\nproperty float x\n"
      "property float y\nproperty float z\nproperty uchar red\nelement face 1\n"
      "property list uchar int vertex_indices\nend_header\n"
      "0 0 0 255\n1 0 0 0\n0 1 0 9\n3 0 1 2\n");
  const TriangleMesh m = read_ply(in);
  EXPECT_EQ(m.vertex_count(), 3);
  EXPECT_EQ(m.face_count(), 1);
}

TEST(ReadPly, RejectsQuads) {
  std::istringstream in(
      "ply\nformat ascii 1.0\nelement vertex 4\nproperty float x\nproperty float y\n"
      "property float z\nelement face 1\nproperty list uchar int vertex_indices\nend_header\n"
      "0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n");
  EXPECT_THROW(read_ply(in), ParseError);
}

class RoundTrip : public ::testing::TestWithParam<int> {};

TEST_P(RoundTrip, SaveLoadReproducesMesh) {
  const int seed = GetParam();
  const TriangleMesh m = lt::jittered_sphere(5 + seed % 4, 6 + seed % 5, 0.2, seed);
  const auto dir = lt::temp_dir("io");
  for (const char* name : {"a.obj", "b.ply"}) {
    save_mesh(m, dir / name);
    const TriangleMesh back = load_mesh(dir / name);
    EXPECT_EQ(back.faces(), m.faces());
    EXPECT_LT((back.vertices() - m.vertices()).cwiseAbs().maxCoeff(), 1e-6);
  }
  save_mesh(m, dir / "c.ply", std::nullopt, PlyEncoding::ascii);
  EXPECT_EQ(load_mesh(dir / "c.ply").faces(), m.faces());
  // OBJ text uses max_digits10, so it is exact
  EXPECT_EQ(load_mesh(dir / "a.obj").vertices(), m.vertices());
  std::filesystem::remove_all(dir);
}

INSTANTIATE_TEST_SUITE_P(RandomMeshes, RoundTrip, ::testing::Range(1, 6));

TEST(LoadMesh, MissingFileAndUnknownExtension) {
  EXPECT_THROW(load_mesh("/nonexistent/file.obj"), ParseError);
  EXPECT_THROW(load_mesh("mesh.stl"), InvalidArgument);
}

}  // namespace
