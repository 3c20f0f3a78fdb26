#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "tpzmc/intersect.hpp"
#include "tpzmc/mesh.hpp"
#include "tpzmc/mesh_io.hpp"

using namespace tpzmc;

namespace {

TaggedMesh one_triangle() {
  TaggedMesh m;
  m.add_vertex({0, 0, 0});
  m.add_vertex({1, 0, 0});
  m.add_vertex({0, 1, 0});
  m.add_face(0, 1, 2, {CausalClass::Spacelike, Patch::Max, 0});
  return m;
}

TaggedMesh random_mesh(std::uint64_t seed, int nv, int nf) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-3, 3);
  std::uniform_int_distribution<int> pick(0, nv - 1), tag(0, 2), copy(0, 40);
  TaggedMesh m;
  for (int i = 0; i < nv; ++i) m.add_vertex({u(rng) * 1e-3, u(rng) * 1e5, u(rng) / 3.0});
  for (int f = 0; f < nf; ++f)
    m.add_face(pick(rng), pick(rng), pick(rng), {static_cast<CausalClass>(tag(rng)), static_cast<Patch>(tag(rng)), copy(rng)});
  return m;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("tpzmc_test_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST(Mesh, Validate) {
  auto m = one_triangle();
  EXPECT_NO_THROW(validate(m));
  m.faces[0][2] = 7;
  EXPECT_THROW(validate(m), Error);
}

TEST(Mesh, WeldMergesAndDropsDuplicates) {
  TaggedMesh m = one_triangle();
  TaggedMesh other = one_triangle();
  other.vertices[1] += Vec3{3e-8, 0, 0};
  m.append(other);
  const auto st = weld(m, 1e-7);
  EXPECT_EQ(m.vertices.size(), 3u);
  EXPECT_EQ(m.faces.size(), 1u);
  EXPECT_EQ(st.dropped_duplicates, 1u);
  EXPECT_EQ(st.merged_vertices, 3u);
}

TEST(Mesh, GroupedWeldKeepsCloseVerticesOfOneGroup) {
  TaggedMesh m;
  m.add_vertex({0, 0, 0});
  m.add_vertex({5e-8, 0, 0});
  m.add_vertex({1, 0, 0});
  m.add_vertex({1e-12, 0, 0});
  m.add_face(0, 1, 2, {});
  m.add_face(3, 1, 2, {});
  std::vector<std::int32_t> group = {0, 0, 0, 1};
  weld(m, 1e-7, &group);
  EXPECT_EQ(m.vertices.size(), 3u);  // vertex 3 joins vertex 0 (nearest), 0 and 1 stay apart
  EXPECT_EQ(m.faces.size(), 1u);
}

TEST(Mesh, GroupedWeldAmbiguity) {
  TaggedMesh m;
  m.add_vertex({0, 0, 0});
  m.add_vertex({1.5e-7, 0, 0});
  m.add_vertex({0.75e-7, 0, 0});
  std::vector<std::int32_t> group = {0, 1, 2};
  try {
    weld(m, 1e-7, &group);
    FAIL();
  } catch (const GlueError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Glue);
    EXPECT_NEAR(e.max_gap(), 1.5e-7, 1e-20);
  }
}

TEST(MeshIo, EmptyMesh) {
  TaggedMesh m;
  const auto obj = obj_string(m);
  EXPECT_NE(obj.find("# vertices 0 faces 0"), std::string::npos);
  EXPECT_EQ(obj.find("\nv "), std::string::npos);
  const auto ply = ply_bytes(m);
  EXPECT_EQ(ply.substr(0, 4), "ply\n");
  EXPECT_EQ(ply.size(), ply.find("end_header\n") + 11);
  EXPECT_TRUE(parse_ply(ply).vertices.empty());
}

TEST(MeshIo, SingleTriangleObj) {
  const auto obj = obj_string(one_triangle());
  EXPECT_NE(obj.find("v 0 0 0\nv 1 0 0\nv 0 1 0\n"), std::string::npos);
  EXPECT_NE(obj.find("g spacelike_max_copy0\nusemtl spacelike\nf 1 2 3\n"), std::string::npos);
  std::size_t vlines = 0, flines = 0;
  for (std::size_t p = 0; (p = obj.find('\n', p)) != std::string::npos; ++p) {
    vlines += obj.compare(p + 1, 2, "v ") == 0;
    flines += obj.compare(p + 1, 2, "f ") == 0;
  }
  EXPECT_EQ(vlines, 3u);
  EXPECT_EQ(flines, 1u);
}

TEST(MeshIo, RoundTripIsExact) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto m = random_mesh(seed, 200, 300);
    const auto back = parse_obj(obj_string(m));
    ASSERT_EQ(back.vertices.size(), m.vertices.size());
    for (std::size_t i = 0; i < m.vertices.size(); ++i) EXPECT_EQ(back.vertices[i], m.vertices[i]);
    EXPECT_EQ(back.faces, m.faces);
    EXPECT_EQ(back.tags, m.tags);
    const auto pb = parse_ply(ply_bytes(m));
    for (std::size_t i = 0; i < m.vertices.size(); ++i) EXPECT_EQ(pb.vertices[i], m.vertices[i]);
    EXPECT_EQ(pb.faces, m.faces);
    EXPECT_EQ(pb.tags, m.tags);
  }
}

TEST(MeshIo, ShortestDecimals) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0 / 3.0), "0.3333333333333333");
  EXPECT_EQ(format_double(-2.0), "-2");
}

TEST(MeshIo, PlyLayout) {
  const auto ply = ply_bytes(one_triangle());
  const auto body = ply.find("end_header\n") + 11;
  EXPECT_EQ(ply.size() - body, 3u * 24 + (1 + 12 + 1 + 1 + 4));
  EXPECT_NE(ply.find("format binary_little_endian 1.0"), std::string::npos);
  EXPECT_NE(ply.find("property list uint8 int32 vertex_indices"), std::string::npos);
}

TEST(MeshIo, FilesAreWrittenAtomically) {
  const auto path = temp_path("tri.obj");
  export_obj(one_triangle(), path);
  EXPECT_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  EXPECT_EQ(import_obj(path).faces.size(), 1u);
  const auto ply = temp_path("tri.ply");
  export_ply(one_triangle(), ply);
  EXPECT_EQ(import_ply(ply).vertices.size(), 3u);
  std::filesystem::remove(path);
  std::filesystem::remove(ply);
  try {
    export_obj(one_triangle(), "/nonexistent-dir/x.obj");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Io);
  }
}

TEST(Intersect, DisjointAndCrossing) {
  TaggedMesh m = one_triangle();
  m.add_vertex({0, 0, 5});
  m.add_vertex({1, 0, 5});
  m.add_vertex({0, 1, 5});
  m.add_face(3, 4, 5, {});
  EXPECT_EQ(self_intersection_report(m).count, 0u);
  TaggedMesh c = one_triangle();
  c.add_vertex({0.2, 0.2, -1});
  c.add_vertex({0.2, 0.2, 1});
  c.add_vertex({0.3, -0.5, 0.5});
  c.add_face(3, 4, 5, {});
  const auto rep = self_intersection_report(c);
  EXPECT_EQ(rep.count, 1u);
  ASSERT_EQ(rep.samples.size(), 1u);
  EXPECT_EQ(rep.samples[0], (std::pair<std::size_t, std::size_t>{0, 1}));
}

TEST(Intersect, CoplanarOverlap) {
  TaggedMesh m = one_triangle();
  m.add_vertex({0.1, 0.1, 0});
  m.add_vertex({2, 0.1, 0});
  m.add_vertex({0.1, 2, 0});
  m.add_face(3, 4, 5, {});
  EXPECT_EQ(self_intersection_report(m).count, 1u);
}

TEST(Intersect, FlatGridHasNone) {
  TaggedMesh m;
  const int n = 12;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) m.add_vertex({std::sin(0.3 * i), double(i) / n, double(j) / n});
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const std::uint32_t a = j * (n + 1) + i, b = a + 1, c = a + n + 1, d = c + 1;
      m.add_face(a, b, d, {});
      m.add_face(a, d, c, {});
    }
  EXPECT_EQ(self_intersection_report(m).count, 0u);
}
