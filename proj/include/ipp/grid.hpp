#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ipp/geometry.hpp"
#include "ipp/mesh.hpp"
#include "ipp/occlusion.hpp"

namespace ipp {

struct GridSpec {
  Vec3 origin;
  Vec3 extents;       // positive lengths per axis
  double interval = 1.0;

  void validate() const {
    if (interval <= 0) throw std::invalid_argument("grid interval must be > 0");
    if (extents.x < interval || extents.y < interval || extents.z < interval)
      throw std::invalid_argument("grid extents must be >= interval on every axis");
  }
};

struct NoFlyZone {
  Aabb box;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Lattice points surviving containment, safety-distance and no-fly filtering,
// with 26-connectivity adjacency between survivors.
struct ViewpointGraph {
  std::vector<Vec3> viewpoints;
  std::vector<std::array<int32_t, 3>> lattice;  // integer grid coordinates
  std::vector<std::vector<uint32_t>> adjacency;
  double interval = 1.0;

  std::size_t size() const { return viewpoints.size(); }

  // Neighbor per the path model: same vertex or a 26-connectivity edge,
  // i.e. Chebyshev distance <= 1 in lattice coordinates.
  bool are_neighbors(uint32_t a, uint32_t b) const {
    if (a == b) return true;
    const auto& la = lattice[a];
    const auto& lb = lattice[b];
    return std::abs(la[0] - lb[0]) <= 1 && std::abs(la[1] - lb[1]) <= 1 &&
           std::abs(la[2] - lb[2]) <= 1;
  }
};

inline ViewpointGraph build_graph(const GridSpec& grid, const std::vector<TriMesh>& scene,
                                  double safety_distance, const std::vector<NoFlyZone>& zones) {
  grid.validate();
  if (safety_distance < 0) throw std::invalid_argument("safety distance must be >= 0");

  const int nx = static_cast<int>(std::floor(grid.extents.x / grid.interval + 1e-9)) + 1;
  const int ny = static_cast<int>(std::floor(grid.extents.y / grid.interval + 1e-9)) + 1;
  const int nz = static_cast<int>(std::floor(grid.extents.z / grid.interval + 1e-9)) + 1;

  std::vector<TriangleBvh> bvhs;
  bvhs.reserve(scene.size());
  for (const auto& m : scene) bvhs.emplace_back(m);

  ViewpointGraph g;
  g.interval = grid.interval;
  std::unordered_map<uint64_t, uint32_t> index;
  auto key = [&](int i, int j, int k) {
    return (static_cast<uint64_t>(i) << 42) | (static_cast<uint64_t>(j) << 21) |
           static_cast<uint64_t>(k);
  };

  std::size_t cut_inside = 0, cut_safety = 0, cut_zone = 0;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      for (int k = 0; k < nz; ++k) {
        const Vec3 p = grid.origin + Vec3{i * grid.interval, j * grid.interval, k * grid.interval};
        bool inside = false, unsafe = false, zoned = false;
        for (std::size_t m = 0; m < scene.size() && !inside; ++m) inside = bvhs[m].contains(p);
        if (inside) {
          ++cut_inside;
          continue;
        }
        for (const auto& m : scene) {
          // points at exactly the threshold are excluded too
          if (point_mesh_distance(p, m) <= safety_distance) {
            unsafe = true;
            break;
          }
        }
        if (unsafe) {
          ++cut_safety;
          continue;
        }
        for (const auto& z : zones) {
          if (z.box.contains(p)) {
            zoned = true;
            break;
          }
        }
        if (zoned) {
          ++cut_zone;
          continue;
        }
        index[key(i, j, k)] = static_cast<uint32_t>(g.viewpoints.size());
        g.viewpoints.push_back(p);
        g.lattice.push_back({i, j, k});
      }
    }
  }

  if (g.viewpoints.empty()) {
    const std::size_t worst = std::max({cut_inside, cut_safety, cut_zone});
    std::string dominant = worst == cut_safety  ? "safety-distance filter"
                           : worst == cut_zone  ? "no-fly-zone filter"
                                                : "containment filter";
    throw ConfigError("viewpoint space is empty; dominant filter: " + dominant);
  }

  g.adjacency.resize(g.viewpoints.size());
  for (std::size_t v = 0; v < g.viewpoints.size(); ++v) {
    const auto& l = g.lattice[v];
    for (int di = -1; di <= 1; ++di) {
      for (int dj = -1; dj <= 1; ++dj) {
        for (int dk = -1; dk <= 1; ++dk) {
          if (di == 0 && dj == 0 && dk == 0) continue;
          const int i = l[0] + di, j = l[1] + dj, k = l[2] + dk;
          if (i < 0 || j < 0 || k < 0 || i >= nx || j >= ny || k >= nz) continue;
          const auto it = index.find(key(i, j, k));
          if (it != index.end()) g.adjacency[v].push_back(it->second);
        }
      }
    }
  }
  return g;
}

inline bool are_neighbors(const ViewpointGraph& g, uint32_t a, uint32_t b) {
  return g.are_neighbors(a, b);
}

// Default grid around a scene: the combined bounding box padded by vis_dist.
inline GridSpec default_grid(const std::vector<TriMesh>& scene, double interval, double padding) {
  Aabb box;
  for (const auto& m : scene) box.expand(m.bounds());
  GridSpec spec;
  spec.origin = box.min - Vec3{padding, padding, padding};
  spec.extents = (box.max - box.min) + Vec3{2 * padding, 2 * padding, 2 * padding};
  spec.interval = interval;
  return spec;
}

}  // namespace ipp
