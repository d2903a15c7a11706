#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "ipp/geometry.hpp"
#include "ipp/mesh.hpp"

namespace ipp {

// Median-split BVH over mesh triangles. Answers must match the brute-force
// all-faces scan exactly; the tree only prunes boxes the segment cannot touch.
class TriangleBvh {
 public:
  explicit TriangleBvh(const TriMesh& mesh) : mesh_(&mesh) {
    const std::size_t n = mesh.faces.size();
    tri_order_.resize(n);
    std::iota(tri_order_.begin(), tri_order_.end(), 0u);
    boxes_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto [a, b, c] = face_corners(mesh, mesh.faces[i]);
      boxes_[i].expand(a);
      boxes_[i].expand(b);
      boxes_[i].expand(c);
    }
    nodes_.reserve(2 * n);
    build(0, n);
  }

  // True iff any face other than `exclude` intersects the open segment (p, q)
  // with parameter t in (eps, 1-eps).
  bool segment_occluded(const Vec3& p, const Vec3& q, int64_t exclude = -1) const {
    constexpr double kEps = 1e-6;
    return walk_any(0, p, q, [&](uint32_t tri) {
      if (static_cast<int64_t>(tri) == exclude) return false;
      const auto [a, b, c] = face_corners(*mesh_, mesh_->faces[tri]);
      const double t = segment_triangle_hit(p, q, a, b, c);
      return t > kEps && t < 1.0 - kEps;
    });
  }

  // Parity containment test. The ray direction is fixed and slightly
  // irrational per axis to dodge edge/vertex degeneracies.
  bool contains(const Vec3& p) const {
    const Aabb root = nodes_.empty() ? Aabb{} : nodes_[0].box;
    if (!root.contains(p)) return false;
    const Vec3 dir = Vec3{0.5377397651, 0.2712968741, 0.7983152335}.normalized();
    const double reach = (root.size().norm() + 1.0) * 2.0;
    const Vec3 q = p + dir * reach;
    std::size_t crossings = 0;
    walk_all(0, p, q, [&](uint32_t tri) {
      const auto [a, b, c] = face_corners(*mesh_, mesh_->faces[tri]);
      const double t = segment_triangle_hit(p, q, a, b, c);
      if (t >= 0.0) ++crossings;
    });
    return (crossings % 2) == 1;
  }

  const Aabb& bounds() const { return nodes_[0].box; }

 private:
  struct Node {
    Aabb box;
    uint32_t left = 0;    // child index, or first triangle when leaf
    uint32_t count = 0;   // 0 for interior nodes
    uint32_t right = 0;
  };

  static constexpr std::size_t kLeafSize = 4;

  uint32_t build(std::size_t begin, std::size_t end) {
    const auto idx = static_cast<uint32_t>(nodes_.size());
    nodes_.emplace_back();
    Aabb box;
    for (std::size_t i = begin; i < end; ++i) box.expand(boxes_[tri_order_[i]]);
    nodes_[idx].box = box;
    if (end - begin <= kLeafSize) {
      nodes_[idx].left = static_cast<uint32_t>(begin);
      nodes_[idx].count = static_cast<uint32_t>(end - begin);
      return idx;
    }
    const Vec3 ext = box.size();
    int axis = 0;
    if (ext.y > ext.x) axis = 1;
    if (ext.z > (axis == 0 ? ext.x : ext.y)) axis = 2;
    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(tri_order_.begin() + begin, tri_order_.begin() + mid,
                     tri_order_.begin() + end, [&](uint32_t a, uint32_t b) {
                       auto key = [&](uint32_t t) {
                         const Vec3 c = boxes_[t].center();
                         return axis == 0 ? c.x : axis == 1 ? c.y : c.z;
                       };
                       return key(a) < key(b);
                     });
    const uint32_t l = build(begin, mid);
    const uint32_t r = build(mid, end);
    nodes_[idx].left = l;
    nodes_[idx].right = r;
    return idx;
  }

  static bool segment_hits_box(const Vec3& p, const Vec3& q, const Aabb& box) {
    double t0 = 0.0, t1 = 1.0;
    const Vec3 d = q - p;
    const double pv[3] = {p.x, p.y, p.z};
    const double dv[3] = {d.x, d.y, d.z};
    const double lo[3] = {box.min.x, box.min.y, box.min.z};
    const double hi[3] = {box.max.x, box.max.y, box.max.z};
    for (int i = 0; i < 3; ++i) {
      if (std::fabs(dv[i]) < 1e-300) {
        if (pv[i] < lo[i] || pv[i] > hi[i]) return false;
      } else {
        double a = (lo[i] - pv[i]) / dv[i];
        double b = (hi[i] - pv[i]) / dv[i];
        if (a > b) std::swap(a, b);
        t0 = std::max(t0, a);
        t1 = std::min(t1, b);
        if (t0 > t1) return false;
      }
    }
    return true;
  }

  template <class Pred>
  bool walk_any(uint32_t node, const Vec3& p, const Vec3& q, Pred&& pred) const {
    const Node& n = nodes_[node];
    if (!segment_hits_box(p, q, n.box)) return false;
    if (n.count > 0) {
      for (uint32_t i = 0; i < n.count; ++i)
        if (pred(tri_order_[n.left + i])) return true;
      return false;
    }
    return walk_any(n.left, p, q, pred) || walk_any(n.right, p, q, pred);
  }

  template <class Fn>
  void walk_all(uint32_t node, const Vec3& p, const Vec3& q, Fn&& fn) const {
    const Node& n = nodes_[node];
    if (!segment_hits_box(p, q, n.box)) return;
    if (n.count > 0) {
      for (uint32_t i = 0; i < n.count; ++i) fn(tri_order_[n.left + i]);
      return;
    }
    walk_all(n.left, p, q, fn);
    walk_all(n.right, p, q, fn);
  }

  const TriMesh* mesh_;
  std::vector<uint32_t> tri_order_;
  std::vector<Aabb> boxes_;
  std::vector<Node> nodes_;
};

inline bool segment_occluded(const Vec3& p, const Vec3& q, const TriangleBvh& bvh,
                             int64_t exclude = -1) {
  return bvh.segment_occluded(p, q, exclude);
}

// Exact minimum distance from a point to any triangle of the mesh.
inline double point_mesh_distance(const Vec3& p, const TriMesh& mesh) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& f : mesh.faces) {
    const auto [a, b, c] = face_corners(mesh, f);
    best = std::min(best, point_triangle_distance(p, a, b, c));
  }
  return best;
}

}  // namespace ipp
