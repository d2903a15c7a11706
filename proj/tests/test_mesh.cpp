#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "ipp/bridge.hpp"
#include "ipp/mesh.hpp"
#include "ipp/occlusion.hpp"
#include "helpers.hpp"

using namespace ipp;
using ipp::testing::cube;

TEST_CASE("unit cube loads with 12 faces and total area 6") {
  const TriMesh m = cube();
  REQUIRE(m.faces.size() == 12);
  CHECK_THAT(m.total_area(), Catch::Matchers::WithinAbs(6.0, 1e-12));
  for (const auto& f : m.faces) CHECK_THAT(f.normal.norm(), Catch::Matchers::WithinAbs(1.0, 1e-9));
}

TEST_CASE("single triangle metrics") {
  const TriMesh m = make_mesh({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 2}});
  REQUIRE(m.faces.size() == 1);
  const auto [c, n, area] = face_metrics(m, m.faces[0]);
  CHECK_THAT(area, Catch::Matchers::WithinAbs(0.5, 1e-15));
  CHECK_THAT(std::fabs(n.z), Catch::Matchers::WithinAbs(1.0, 1e-15));
  CHECK_THAT(c.x, Catch::Matchers::WithinAbs(1.0 / 3.0, 1e-15));
}

TEST_CASE("obj round trip through loader") {
  std::istringstream src(
      "v 0 0 0\nv 3 0 0\nv 0 4 0\n"
      "f 1 2 3\n");
  const TriMesh m = load_mesh(src, MeshFormat::obj);
  REQUIRE(m.faces.size() == 1);
  CHECK_THAT(m.faces[0].area, Catch::Matchers::WithinAbs(6.0, 1e-12));  // 3-4-5 right triangle
}

TEST_CASE("degenerate faces are dropped and counted") {
  std::istringstream src(
      "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 2 0 0\n"
      "f 1 2 3\nf 1 2 4\n");  // second face is collinear
  const TriMesh m = load_mesh(src, MeshFormat::obj);
  CHECK(m.faces.size() == 1);
  CHECK(m.degenerate_dropped == 1);
}

TEST_CASE("zero valid faces is an error") {
  std::istringstream src("v 0 0 0\nv 1 0 0\nv 2 0 0\nf 1 2 3\n");
  CHECK_THROWS_AS(load_mesh(src, MeshFormat::obj), MeshError);
}

TEST_CASE("garbage input is a format error") {
  std::istringstream src("v 0 0 zero\nf 1 2 3\n");
  CHECK_THROWS_AS(load_mesh(src, MeshFormat::obj), MeshError);
}

TEST_CASE("ascii stl loads a triangle") {
  std::istringstream src(
      "solid t\n facet normal 0 0 1\n  outer loop\n"
      "   vertex 0 0 0\n   vertex 2 0 0\n   vertex 0 2 0\n"
      "  endloop\n endfacet\nendsolid t\n");
  const TriMesh m = load_mesh(src, MeshFormat::stl);
  REQUIRE(m.faces.size() == 1);
  CHECK_THAT(m.faces[0].area, Catch::Matchers::WithinAbs(2.0, 1e-12));
}

TEST_CASE("equilateral triangle area") {
  const double s = 2.0;
  const TriMesh m =
      make_mesh({{0, 0, 0}, {s, 0, 0}, {s / 2, s * std::sqrt(3.0) / 2.0, 0}}, {{0, 1, 2}});
  CHECK_THAT(m.faces[0].area, Catch::Matchers::WithinAbs(std::sqrt(3.0), 1e-12));
}

TEST_CASE("segment occlusion basic cases") {
  const TriMesh wall = make_mesh({{-1, -1, 0}, {1, -1, 0}, {0, 1, 0}}, {{0, 1, 2}});
  CHECK(segment_occluded_brute({0, 0, -1}, {0, 0, 1}, wall));
  CHECK_FALSE(segment_occluded_brute({0, 0, -1}, {0, 0, 1}, wall, /*exclude=*/0));

  const TriMesh box = cube();
  CHECK_FALSE(segment_occluded_brute({2, 2, 0}, {2, -2, 0}, box));
  CHECK(segment_occluded_brute({-2, 0, 0}, {2, 0, 0}, box));
}

TEST_CASE("bvh occlusion equals brute force on random segments") {
  const TriMesh box = cube();
  const TriangleBvh bvh(box);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 p{u(rng), u(rng), u(rng)};
    const Vec3 q{u(rng), u(rng), u(rng)};
    if (distance(p, q) < 1e-9) continue;
    const int64_t exclude = (i % 5 == 0) ? static_cast<int64_t>(i % 12) : -1;
    REQUIRE(bvh.segment_occluded(p, q, exclude) == segment_occluded_brute(p, q, box, exclude));
  }
}

TEST_CASE("occlusion is symmetric in the endpoints") {
  const TriMesh box = cube();
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 300; ++i) {
    const Vec3 p{u(rng), u(rng), u(rng)};
    const Vec3 q{u(rng), u(rng), u(rng)};
    CHECK(segment_occluded_brute(p, q, box) == segment_occluded_brute(q, p, box));
  }
}

TEST_CASE("flipping windings flips normals but keeps areas") {
  TriMesh m = cube();
  const double area = m.total_area();
  std::vector<std::array<uint32_t, 3>> flipped;
  for (const auto& f : m.faces)
    flipped.push_back({f.vertex_indices[0], f.vertex_indices[2], f.vertex_indices[1]});
  const TriMesh r = make_mesh(m.vertices, flipped);
  REQUIRE(r.faces.size() == m.faces.size());
  CHECK_THAT(r.total_area(), Catch::Matchers::WithinAbs(area, 1e-12));
  for (std::size_t i = 0; i < m.faces.size(); ++i) {
    CHECK_THAT((r.faces[i].normal + m.faces[i].normal).norm(),
               Catch::Matchers::WithinAbs(0.0, 1e-12));
  }
}

TEST_CASE("apply_weights") {
  TriMesh m = cube();
  SECTION("no regions leaves all weights 1") {
    apply_weights(m, {});
    for (const auto& f : m.faces) CHECK(f.weight == 1);
  }
  SECTION("box enclosing the model sets every weight") {
    Aabb box;
    box.expand({-2, -2, -2});
    box.expand({2, 2, 2});
    apply_weights(m, {{box, 2}});
    for (const auto& f : m.faces) CHECK(f.weight == 2);
  }
  SECTION("last matching region wins") {
    Aabb all;
    all.expand({-2, -2, -2});
    all.expand({2, 2, 2});
    apply_weights(m, {{all, 2}, {all, 3}});
    for (const auto& f : m.faces) CHECK(f.weight == 3);
  }
  SECTION("empty selection reports zero matches") {
    Aabb far_box;
    far_box.expand({10, 10, 10});
    far_box.expand({11, 11, 11});
    const auto matched = apply_weights(m, {{far_box, 2}});
    CHECK(matched[0] == 0);
  }
  SECTION("total area is invariant") {
    const double before = m.total_area();
    Aabb all;
    all.expand({-2, -2, -2});
    all.expand({2, 2, 2});
    apply_weights(m, {{all, 5}});
    CHECK(m.total_area() == before);
  }
}

TEST_CASE("bridge generator emits a valid mesh") {
  BridgeSpec spec;  // defaults: 3 spans
  const TriMesh m = generate_bridge(spec);
  CHECK(m.degenerate_dropped == 0);
  CHECK(m.faces.size() > 300);
  CHECK(m.faces.size() < 900);
  CHECK(ipp::testing::edges_shared_by_at_most_two(m));
}

TEST_CASE("bridge deck cells have the expected area") {
  BridgeSpec spec;
  spec.spans = 1;
  spec.span_length = 6.0;
  spec.deck_width = 2.0;
  spec.cell = 1.0;
  spec.cell_y = 0.5;
  spec.skew_deg = 0.0;
  const TriMesh m = generate_bridge(spec);
  // deck-top cells are 1.0 x 0.5 split on the diagonal
  int top_cells = 0;
  for (const auto& f : m.faces) {
    if (f.normal.z > 0.99 && std::fabs(f.centroid.z - spec.deck_top()) < 1e-9) {
      CHECK_THAT(f.area, Catch::Matchers::WithinAbs(0.25, 1e-12));
      ++top_cells;
    }
  }
  CHECK(top_cells == 6 * 4 * 2);
}

TEST_CASE("bridge midspan weight region selects by centroid") {
  BridgeSpec spec;
  const TriMesh base = generate_bridge(spec);
  TriMesh m = base;
  const double mid = spec.span_length / 2.0;  // center of the first span
  Aabb box;
  box.expand({mid - 1.0, -100, -100});
  box.expand({mid + 1.0, 100, 100});
  apply_weights(m, {{box, 2}});
  std::size_t expect = 0;
  for (const auto& f : base.faces)
    if (f.centroid.x >= mid - 1.0 && f.centroid.x <= mid + 1.0) ++expect;
  std::size_t got = 0;
  for (const auto& f : m.faces)
    if (f.weight == 2) ++got;
  CHECK(got == expect);
  CHECK(expect > 0);
}

TEST_CASE("bvh containment classifies points around a cube") {
  const TriMesh box = cube();
  const TriangleBvh bvh(box);
  CHECK(bvh.contains({0, 0, 0}));
  CHECK(bvh.contains({0.2, -0.3, 0.1}));
  CHECK_FALSE(bvh.contains({0.9, 0, 0}));
  CHECK_FALSE(bvh.contains({2, 2, 2}));
}
