#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

#include "ipp/grid.hpp"
#include "ipp/rng.hpp"
#include "ipp/visibility.hpp"

namespace ipp {

// The GA genome: an ordered sequence of graph vertex indices. Consecutive
// vertices must be neighbors (equal indices allowed; collapsed at export).
struct InspectionPath {
  std::vector<uint32_t> vertex_indices;

  std::size_t size() const { return vertex_indices.size(); }
  uint32_t operator[](std::size_t i) const { return vertex_indices[i]; }

  bool continuous(const ViewpointGraph& g) const {
    if (vertex_indices.size() < 2) return false;
    for (std::size_t i = 0; i + 1 < vertex_indices.size(); ++i)
      if (!g.are_neighbors(vertex_indices[i], vertex_indices[i + 1])) return false;
    return true;
  }

  // Distinct vertices in first-visit order (for coverage and pose planning).
  std::vector<uint32_t> distinct_vertices() const {
    std::vector<uint32_t> out;
    std::vector<uint32_t> sorted;
    for (uint32_t v : vertex_indices) {
      auto it = std::lower_bound(sorted.begin(), sorted.end(), v);
      if (it == sorted.end() || *it != v) {
        sorted.insert(it, v);
        out.push_back(v);
      }
    }
    return out;
  }
};

class PathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double path_length(const InspectionPath& p, const ViewpointGraph& g) {
  if (!p.continuous(g)) throw PathError("path is not continuous on the graph");
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i)
    len += distance(g.viewpoints[p[i]], g.viewpoints[p[i + 1]]);
  return len;
}

// Area-weighted coverage: a face counts iff it is visible from at least w_j
// DISTINCT path vertices. Optional mask restricts both numerator and
// denominator to the flagged faces (used for partial-space inspection).
inline double path_coverage(const InspectionPath& p, const VisibilityMatrix& vm,
                            const TriMesh& mesh, const std::vector<bool>* face_mask = nullptr) {
  if (vm.face_count() != mesh.faces.size())
    throw PathError("visibility matrix does not match the mesh");
  const auto distinct = p.distinct_vertices();
  std::vector<uint32_t> hits(mesh.faces.size(), 0);
  for (uint32_t v : distinct) {
    const uint64_t* row = vm.row(v);
    for (std::size_t w = 0; w < vm.words_per_row(); ++w) {
      uint64_t bits = row[w];
      while (bits) {
        const int b = std::countr_zero(bits);
        bits &= bits - 1;
        ++hits[w * 64 + b];
      }
    }
  }
  double covered = 0.0, total = 0.0;
  for (std::size_t j = 0; j < mesh.faces.size(); ++j) {
    if (face_mask && !(*face_mask)[j]) continue;
    total += mesh.faces[j].area;
    if (hits[j] >= mesh.faces[j].weight) covered += mesh.faces[j].area;
  }
  return total > 0.0 ? covered / total : 0.0;
}

// Mask of faces that the viewpoint space can possibly cover: at least w_j
// distinct viewpoints in the whole graph see the face.
inline std::vector<bool> reachable_faces(const VisibilityMatrix& vm, const TriMesh& mesh) {
  std::vector<bool> mask(mesh.faces.size(), false);
  for (std::size_t j = 0; j < mesh.faces.size(); ++j) {
    uint32_t count = 0;
    for (std::size_t i = 0; i < vm.viewpoint_count() && count < mesh.faces[j].weight; ++i)
      if (vm.get(i, j)) ++count;
    mask[j] = count >= mesh.faces[j].weight;
  }
  return mask;
}

// Random walk: uniform start vertex, each step a uniform incident edge.
inline InspectionPath random_init(const ViewpointGraph& g, std::size_t n_points, Rng& rng) {
  if (n_points < 2) throw PathError("random_init needs n_points >= 2");
  if (g.size() == 0) throw PathError("empty graph");
  constexpr int kMaxStartRetries = 64;
  uint32_t start = 0;
  bool found = false;
  for (int attempt = 0; attempt < kMaxStartRetries; ++attempt) {
    start = static_cast<uint32_t>(uniform_index(rng, g.size()));
    if (!g.adjacency[start].empty()) {
      found = true;
      break;
    }
  }
  if (!found) throw PathError("random_init: could not find a non-isolated start vertex");

  InspectionPath p;
  p.vertex_indices.reserve(n_points);
  p.vertex_indices.push_back(start);
  uint32_t cur = start;
  while (p.size() < n_points) {
    const auto& adj = g.adjacency[cur];
    cur = adj[uniform_index(rng, adj.size())];
    p.vertex_indices.push_back(cur);
  }
  return p;
}

// Uniform-cost search with Euclidean edge weights; returns the vertex chain
// from `from` to `to` inclusive, or empty when disconnected.
inline std::vector<uint32_t> shortest_path(const ViewpointGraph& g, uint32_t from, uint32_t to) {
  if (from == to) return {from};
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(g.size(), inf);
  std::vector<uint32_t> prev(g.size(), UINT32_MAX);
  using Item = std::pair<double, uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  dist[from] = 0.0;
  open.emplace(0.0, from);
  while (!open.empty()) {
    const auto [d, v] = open.top();
    open.pop();
    if (d > dist[v]) continue;
    if (v == to) break;
    for (uint32_t n : g.adjacency[v]) {
      const double nd = d + distance(g.viewpoints[v], g.viewpoints[n]);
      if (nd < dist[n]) {
        dist[n] = nd;
        prev[n] = v;
        open.emplace(nd, n);
      }
    }
  }
  if (dist[to] == inf) return {};
  std::vector<uint32_t> chain;
  for (uint32_t v = to; v != UINT32_MAX; v = prev[v]) chain.push_back(v);
  std::reverse(chain.begin(), chain.end());
  return chain;
}

// Span-by-span loop template: per span, loops of 4 sampled viewpoints
// (2 above deck height, 2 at or below), joined by shortest graph paths.
struct SpanTemplate {
  struct Interval {
    double lo, hi;
  };
  int axis = 0;                     // 0=x, 1=y, 2=z
  std::vector<Interval> spans;      // ordered, non-overlapping
  int loops_per_span = 1;
  double deck_height = 0.0;         // z splitting "above" from "below"

  void validate() const {
    if (spans.empty()) throw PathError("span template needs at least one span");
    if (loops_per_span < 1) throw PathError("loops_per_span must be >= 1");
    for (std::size_t s = 0; s < spans.size(); ++s) {
      if (spans[s].lo > spans[s].hi) throw PathError("span interval reversed");
      if (s > 0 && spans[s].lo < spans[s - 1].hi) throw PathError("span intervals overlap");
    }
  }
};

namespace detail {

inline double axis_coord(const Vec3& p, int axis) {
  return axis == 0 ? p.x : axis == 1 ? p.y : p.z;
}

}  // namespace detail

inline InspectionPath rule_based_init(const ViewpointGraph& g, const SpanTemplate& t, Rng& rng) {
  t.validate();
  constexpr int kMaxRetries = 32;

  InspectionPath path;
  for (std::size_t s = 0; s < t.spans.size(); ++s) {
    std::vector<uint32_t> above, below;
    for (uint32_t v = 0; v < g.size(); ++v) {
      const double c = detail::axis_coord(g.viewpoints[v], t.axis);
      if (c < t.spans[s].lo || c > t.spans[s].hi) continue;
      (g.viewpoints[v].z > t.deck_height ? above : below).push_back(v);
    }
    if (above.size() < 2 || below.size() < 2)
      throw PathError("span " + std::to_string(s) + " lacks viewpoints above and below deck");

    for (int loop = 0; loop < t.loops_per_span; ++loop) {
      bool connected = false;
      for (int attempt = 0; attempt < kMaxRetries && !connected; ++attempt) {
        // Alternate above/below so the loop crosses the deck level twice.
        std::array<uint32_t, 4> pts = {above[uniform_index(rng, above.size())],
                                       below[uniform_index(rng, below.size())],
                                       below[uniform_index(rng, below.size())],
                                       above[uniform_index(rng, above.size())]};
        std::vector<uint32_t> loop_path;
        bool ok = true;
        // chain from the previous path end into the first loop point
        uint32_t anchor = path.vertex_indices.empty() ? pts[0] : path.vertex_indices.back();
        std::vector<uint32_t> waypoints;
        waypoints.push_back(anchor);
        for (uint32_t q : pts) waypoints.push_back(q);
        waypoints.push_back(pts[0]);  // close the loop
        for (std::size_t w = 0; w + 1 < waypoints.size() && ok; ++w) {
          auto leg = shortest_path(g, waypoints[w], waypoints[w + 1]);
          if (leg.empty()) {
            ok = false;
            break;
          }
          const std::size_t skip = loop_path.empty() ? 0 : 1;
          loop_path.insert(loop_path.end(), leg.begin() + skip, leg.end());
        }
        if (!ok) continue;
        const std::size_t skip = path.vertex_indices.empty() ? 0 : 1;
        path.vertex_indices.insert(path.vertex_indices.end(), loop_path.begin() + skip,
                                   loop_path.end());
        connected = true;
      }
      if (!connected)
        throw PathError("rule_based_init: unreachable loop point in span " + std::to_string(s));
    }
  }
  if (path.size() < 2) path.vertex_indices.push_back(path.vertex_indices.front());
  return path;
}

}  // namespace ipp
