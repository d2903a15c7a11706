#pragma once

#include <map>
#include <utility>
#include <vector>

#include "ipp/bridge.hpp"
#include "ipp/grid.hpp"
#include "ipp/mesh.hpp"

namespace ipp::testing {

// Axis-aligned cube as 12 triangles with outward winding.
inline TriMesh cube(const Vec3& center = {0, 0, 0}, double side = 1.0) {
  const double h = side / 2.0;
  std::vector<Vec3> v;
  for (int i = 0; i < 8; ++i)
    v.push_back(center + Vec3{(i & 1) ? h : -h, (i & 2) ? h : -h, (i & 4) ? h : -h});
  // faces as quads (a, b, c, d) with outward normals
  const int quads[6][4] = {
      {0, 2, 3, 1},  // z-
      {4, 5, 7, 6},  // z+
      {0, 1, 5, 4},  // y-
      {2, 6, 7, 3},  // y+
      {0, 4, 6, 2},  // x-
      {1, 3, 7, 5},  // x+
  };
  std::vector<std::array<uint32_t, 3>> tris;
  for (const auto& q : quads) {
    tris.push_back({static_cast<uint32_t>(q[0]), static_cast<uint32_t>(q[1]),
                    static_cast<uint32_t>(q[2])});
    tris.push_back({static_cast<uint32_t>(q[0]), static_cast<uint32_t>(q[2]),
                    static_cast<uint32_t>(q[3])});
  }
  return make_mesh(std::move(v), tris);
}

// Unit cube centered in a (n x n x n) grid of the given interval.
inline GridSpec centered_grid(int n, double interval, const Vec3& center = {0, 0, 0}) {
  GridSpec g;
  const double half = (n - 1) * interval / 2.0;
  g.origin = center - Vec3{half, half, half};
  g.extents = Vec3{(n - 1) * interval, (n - 1) * interval, (n - 1) * interval};
  g.interval = interval;
  return g;
}

// Every undirected edge of a valid triangulation is shared by at most two
// faces (boundary edges by one).
inline bool edges_shared_by_at_most_two(const TriMesh& m) {
  std::map<std::pair<uint32_t, uint32_t>, int> count;
  for (const auto& f : m.faces) {
    for (int e = 0; e < 3; ++e) {
      uint32_t a = f.vertex_indices[e];
      uint32_t b = f.vertex_indices[(e + 1) % 3];
      if (a > b) std::swap(a, b);
      if (++count[{a, b}] > 2) return false;
    }
  }
  return true;
}

}  // namespace ipp::testing
