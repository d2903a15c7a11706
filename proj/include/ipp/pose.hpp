#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ipp/path.hpp"

namespace ipp {

struct CameraPose {
  uint32_t viewpoint = 0;      // graph vertex index
  Vec3 position;
  Vec3 sight;                  // unit
  uint32_t target_face = 0;
};

struct PoseParams {
  double fov_deg = 90.0;       // camera field of view as configured
  bool fov_literal = true;     // compare view angles against fov_deg directly
                               // (cone half-angle reading); off: fov_deg / 2

  double cone_half_angle() const { return fov_literal ? fov_deg : fov_deg / 2.0; }

  void validate() const {
    if (fov_deg <= 0 || fov_deg >= 180)
      throw std::invalid_argument("fov must be in (0, 180) degrees");
  }
};

// One candidate per (distinct path vertex, face visible from it) pair, sight
// aimed at the face centroid. Poses toward invisible faces can never win the
// greedy argmax under the tie-break, so they are not enumerated.
inline std::vector<CameraPose> candidate_poses(const InspectionPath& path, const TriMesh& mesh,
                                               const ViewpointGraph& g,
                                               const VisibilityMatrix& vm) {
  std::vector<CameraPose> out;
  for (uint32_t v : path.distinct_vertices()) {
    for (std::size_t j = 0; j < mesh.faces.size(); ++j) {
      if (!vm.get(v, j)) continue;
      CameraPose p;
      p.viewpoint = v;
      p.position = g.viewpoints[v];
      p.sight = (mesh.faces[j].centroid - p.position).normalized();
      p.target_face = static_cast<uint32_t>(j);
      out.push_back(p);
    }
  }
  return out;
}

// Faces captured by a pose: visible from its viewpoint and within the cone.
inline std::vector<uint32_t> pose_visible_set(const CameraPose& pose, const VisibilityMatrix& vm,
                                              const TriMesh& mesh, const PoseParams& params) {
  params.validate();
  std::vector<uint32_t> out;
  for (std::size_t k = 0; k < mesh.faces.size(); ++k) {
    if (!vm.get(pose.viewpoint, k)) continue;
    const Vec3 seg = mesh.faces[k].centroid - pose.position;
    if (angle_between_deg(pose.sight, seg) <= params.cone_half_angle())
      out.push_back(static_cast<uint32_t>(k));
  }
  return out;
}

// Greedy max-area cover of the faces visible from the path. Ties go to the
// earlier path vertex, then to the lexicographically smaller sight vector.
// Output is reordered to follow the path.
inline std::vector<CameraPose> greedy_poses(const InspectionPath& path, const VisibilityMatrix& vm,
                                            const TriMesh& mesh, const ViewpointGraph& g,
                                            const PoseParams& params) {
  params.validate();
  const auto candidates = candidate_poses(path, mesh, g, vm);
  std::vector<std::vector<uint32_t>> visible(candidates.size());
  for (std::size_t c = 0; c < candidates.size(); ++c)
    visible[c] = pose_visible_set(candidates[c], vm, mesh, params);

  // first-visit order of each path vertex, for tie-breaks and final sorting
  const auto order = path.distinct_vertices();
  std::vector<uint32_t> rank(g.size(), UINT32_MAX);
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = static_cast<uint32_t>(r);

  std::vector<bool> uncovered(mesh.faces.size(), false);
  std::size_t remaining = 0;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    for (uint32_t k : visible[c]) {
      if (!uncovered[k]) {
        uncovered[k] = true;
        ++remaining;
      }
    }
  }
  // `uncovered` now flags exactly the path-visible faces

  auto sight_less = [](const Vec3& a, const Vec3& b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y < b.y;
    return a.z < b.z;
  };

  std::vector<CameraPose> picked;
  while (remaining > 0) {
    double best_area = -1.0;
    std::size_t best = candidates.size();
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      double area = 0.0;
      for (uint32_t k : visible[c])
        if (uncovered[k]) area += mesh.faces[k].area;
      if (area <= 0.0) continue;
      if (area > best_area ||
          (area == best_area &&
           (rank[candidates[c].viewpoint] < rank[candidates[best].viewpoint] ||
            (rank[candidates[c].viewpoint] == rank[candidates[best].viewpoint] &&
             sight_less(candidates[c].sight, candidates[best].sight))))) {
        best_area = area;
        best = c;
      }
    }
    if (best == candidates.size()) break;  // unreachable: remaining > 0 implies a gain
    picked.push_back(candidates[best]);
    for (uint32_t k : visible[best]) {
      if (uncovered[k]) {
        uncovered[k] = false;
        --remaining;
      }
    }
  }

  std::stable_sort(picked.begin(), picked.end(), [&](const CameraPose& a, const CameraPose& b) {
    return rank[a.viewpoint] < rank[b.viewpoint];
  });
  return picked;
}

}  // namespace ipp
