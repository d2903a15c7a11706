#pragma once

#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "ipp/grid.hpp"
#include "ipp/mesh.hpp"
#include "ipp/occlusion.hpp"

namespace ipp {

struct VisibilityParams {
  double vis_dist = 10.0;    // m
  double vis_angle = 45.0;   // degrees, measured from the face normal line
  bool occlusion_enabled = true;

  void validate() const {
    if (vis_dist <= 0) throw std::invalid_argument("vis_dist must be > 0");
    if (vis_angle <= 0 || vis_angle > 90)
      throw std::invalid_argument("vis_angle must be in (0, 90]");
  }
};

class CacheError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline uint64_t fnv1a(const void* data, std::size_t len, uint64_t h = 0xcbf29ce484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline uint64_t hash_mesh(const TriMesh& mesh) {
  uint64_t h = fnv1a(mesh.vertices.data(), mesh.vertices.size() * sizeof(Vec3));
  for (const auto& f : mesh.faces) {
    h = fnv1a(f.vertex_indices.data(), sizeof(f.vertex_indices), h);
    h = fnv1a(&f.weight, sizeof(f.weight), h);
  }
  return h;
}

inline uint64_t hash_graph(const ViewpointGraph& g) {
  uint64_t h = fnv1a(g.viewpoints.data(), g.viewpoints.size() * sizeof(Vec3));
  h = fnv1a(&g.interval, sizeof(g.interval), h);
  return h;
}

inline uint64_t hash_params(const VisibilityParams& p) {
  uint64_t h = fnv1a(&p.vis_dist, sizeof(p.vis_dist));
  h = fnv1a(&p.vis_angle, sizeof(p.vis_angle), h);
  const uint8_t occ = p.occlusion_enabled ? 1 : 0;
  return fnv1a(&occ, sizeof(occ), h);
}

}  // namespace detail

// |VP| x |F| bit matrix, row-major by viewpoint, packed in 64-bit words.
class VisibilityMatrix {
 public:
  VisibilityMatrix() = default;
  VisibilityMatrix(std::size_t viewpoints, std::size_t faces)
      : rows_(viewpoints), cols_(faces), words_per_row_((faces + 63) / 64),
        bits_(rows_ * words_per_row_, 0) {}

  std::size_t viewpoint_count() const { return rows_; }
  std::size_t face_count() const { return cols_; }

  bool get(std::size_t i, std::size_t j) const {
    return (bits_[i * words_per_row_ + j / 64] >> (j % 64)) & 1ULL;
  }
  void set(std::size_t i, std::size_t j, bool v) {
    auto& w = bits_[i * words_per_row_ + j / 64];
    const uint64_t mask = 1ULL << (j % 64);
    w = v ? (w | mask) : (w & ~mask);
  }

  const uint64_t* row(std::size_t i) const { return bits_.data() + i * words_per_row_; }
  std::size_t words_per_row() const { return words_per_row_; }

  bool operator==(const VisibilityMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && bits_ == o.bits_;
  }

  uint64_t params_hash = 0, mesh_hash = 0, graph_hash = 0;

 private:
  std::size_t rows_ = 0, cols_ = 0, words_per_row_ = 0;
  std::vector<uint64_t> bits_;

  friend void save_matrix(const VisibilityMatrix&, std::ostream&);
  friend VisibilityMatrix load_matrix(std::istream&);
};

// Single entry of the visibility test: distance, inclination angle, occlusion.
// The angle is between the sight segment and the face normal line (unsigned),
// visible iff it is <= vis_angle.
inline bool face_visible(const Vec3& vp, const Face& face, const TriMesh& mesh,
                         const VisibilityParams& params, const TriangleBvh* bvh = nullptr) {
  const Vec3 sight = face.centroid - vp;
  const double dist = sight.norm();
  if (dist > params.vis_dist || dist == 0.0) return false;
  double ang = angle_between_deg(sight, face.normal);
  if (ang > 90.0) ang = 180.0 - ang;  // unsigned: face plane, not signed normal
  if (ang > params.vis_angle) return false;
  if (params.occlusion_enabled) {
    const int64_t self = &face - mesh.faces.data();
    const bool occluded = bvh ? bvh->segment_occluded(vp, face.centroid, self)
                              : segment_occluded_brute(vp, face.centroid, mesh, self);
    if (occluded) return false;
  }
  return true;
}

inline VisibilityMatrix compute_visibility(const ViewpointGraph& graph, const TriMesh& mesh,
                                           const VisibilityParams& params, unsigned workers = 0) {
  params.validate();
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  VisibilityMatrix vm(graph.size(), mesh.faces.size());
  vm.params_hash = detail::hash_params(params);
  vm.mesh_hash = detail::hash_mesh(mesh);
  vm.graph_hash = detail::hash_graph(graph);

  const TriangleBvh bvh(mesh);
  auto fill_rows = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      for (std::size_t j = 0; j < mesh.faces.size(); ++j)
        vm.set(i, j, face_visible(graph.viewpoints[i], mesh.faces[j], mesh, params, &bvh));
  };

  if (workers <= 1 || graph.size() < 64) {
    fill_rows(0, graph.size());
  } else {
    // Disjoint row ranges per worker; the result is schedule-independent.
    std::vector<std::thread> pool;
    const std::size_t chunk = (graph.size() + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t b = w * chunk;
      const std::size_t e = std::min(graph.size(), b + chunk);
      if (b >= e) break;
      pool.emplace_back(fill_rows, b, e);
    }
    for (auto& t : pool) t.join();
  }
  return vm;
}

namespace detail {
constexpr uint32_t kCacheMagic = 0x56495342;  // "VISB"
constexpr uint32_t kCacheVersion = 1;
}  // namespace detail

inline void save_matrix(const VisibilityMatrix& m, std::ostream& out) {
  auto put = [&](const auto& v) { out.write(reinterpret_cast<const char*>(&v), sizeof(v)); };
  put(detail::kCacheMagic);
  put(detail::kCacheVersion);
  const uint64_t rows = m.rows_, cols = m.cols_;
  put(rows);
  put(cols);
  put(m.params_hash);
  put(m.mesh_hash);
  put(m.graph_hash);
  out.write(reinterpret_cast<const char*>(m.bits_.data()),
            static_cast<std::streamsize>(m.bits_.size() * sizeof(uint64_t)));
  if (!out) throw CacheError("visibility cache: write failed");
}

inline VisibilityMatrix load_matrix(std::istream& in) {
  auto get = [&](auto& v) {
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!in) throw CacheError("visibility cache: truncated or corrupt file");
  };
  uint32_t magic = 0, version = 0;
  get(magic);
  get(version);
  if (magic != detail::kCacheMagic) throw CacheError("visibility cache: bad magic");
  if (version != detail::kCacheVersion) throw CacheError("visibility cache: unsupported version");
  uint64_t rows = 0, cols = 0;
  get(rows);
  get(cols);
  VisibilityMatrix m(rows, cols);
  get(m.params_hash);
  get(m.mesh_hash);
  get(m.graph_hash);
  in.read(reinterpret_cast<char*>(m.bits_.data()),
          static_cast<std::streamsize>(m.bits_.size() * sizeof(uint64_t)));
  if (!in) throw CacheError("visibility cache: truncated bit data");
  return m;
}

// Loads a cache and rejects it unless it matches the current inputs.
inline VisibilityMatrix load_matrix_checked(std::istream& in, const ViewpointGraph& graph,
                                            const TriMesh& mesh, const VisibilityParams& params) {
  VisibilityMatrix m = load_matrix(in);
  if (m.params_hash != detail::hash_params(params) || m.mesh_hash != detail::hash_mesh(mesh) ||
      m.graph_hash != detail::hash_graph(graph) || m.viewpoint_count() != graph.size() ||
      m.face_count() != mesh.faces.size())
    throw CacheError("visibility cache is stale: inputs changed since it was written");
  return m;
}

}  // namespace ipp
