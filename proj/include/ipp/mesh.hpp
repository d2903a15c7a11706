#pragma once

#include <array>
#include <cctype>
#include <cstdint>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "ipp/geometry.hpp"

namespace ipp {

enum class MeshRole { inspection_object, environment_obstacle };
enum class MeshFormat { obj, stl };

struct Face {
  std::array<uint32_t, 3> vertex_indices{};
  Vec3 centroid;
  Vec3 normal;   // unit, from vertex winding
  double area = 0.0;
  uint32_t weight = 1;  // required distinct covering viewpoints
};

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<Face> faces;
  MeshRole role = MeshRole::inspection_object;
  std::size_t degenerate_dropped = 0;

  double total_area() const {
    double s = 0.0;
    for (const auto& f : faces) s += f.area;
    return s;
  }

  Aabb bounds() const {
    Aabb b;
    for (const auto& v : vertices) b.expand(v);
    return b;
  }
};

// Selector is either an axis-aligned box (faces whose centroid lies inside)
// or an explicit face-index list. Last matching region wins on overlap.
struct RegionSpec {
  std::variant<Aabb, std::vector<uint32_t>> selector;
  uint32_t weight = 1;
};

namespace detail {

constexpr double kDegenerateArea = 1e-12;

inline std::optional<Face> make_face(const std::vector<Vec3>& verts, uint32_t a, uint32_t b,
                                     uint32_t c) {
  if (a >= verts.size() || b >= verts.size() || c >= verts.size())
    throw MeshError("face vertex index out of range");
  if (a == b || b == c || a == c) return std::nullopt;
  const Vec3& v0 = verts[a];
  const Vec3& v1 = verts[b];
  const Vec3& v2 = verts[c];
  const Vec3 n = (v1 - v0).cross(v2 - v0);
  const double area = 0.5 * n.norm();
  if (area < kDegenerateArea) return std::nullopt;
  Face f;
  f.vertex_indices = {a, b, c};
  f.centroid = (v0 + v1 + v2) / 3.0;
  f.normal = n.normalized();
  f.area = area;
  return f;
}

}  // namespace detail

// Builds a mesh from raw vertices and index triples, dropping degenerate
// triangles and populating all per-face derived quantities.
inline TriMesh make_mesh(std::vector<Vec3> vertices,
                         const std::vector<std::array<uint32_t, 3>>& tris,
                         MeshRole role = MeshRole::inspection_object) {
  TriMesh m;
  m.vertices = std::move(vertices);
  m.role = role;
  for (const auto& t : tris) {
    if (auto f = detail::make_face(m.vertices, t[0], t[1], t[2]))
      m.faces.push_back(*f);
    else
      ++m.degenerate_dropped;
  }
  if (m.faces.empty()) throw MeshError("mesh has no valid faces");
  return m;
}

inline std::tuple<Vec3, Vec3, Vec3> face_corners(const TriMesh& m, const Face& f) {
  return {m.vertices[f.vertex_indices[0]], m.vertices[f.vertex_indices[1]],
          m.vertices[f.vertex_indices[2]]};
}

// centroid, unit normal, area recomputed from the vertex data.
inline std::tuple<Vec3, Vec3, double> face_metrics(const TriMesh& m, const Face& f) {
  const auto [v0, v1, v2] = face_corners(m, f);
  const Vec3 n = (v1 - v0).cross(v2 - v0);
  const double area = 0.5 * n.norm();
  if (area < detail::kDegenerateArea) throw MeshError("degenerate face");
  return {(v0 + v1 + v2) / 3.0, n.normalized(), area};
}

namespace detail {

inline TriMesh load_obj(std::istream& in, MeshRole role) {
  std::vector<Vec3> verts;
  std::vector<std::array<uint32_t, 3>> tris;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      Vec3 v;
      if (!(ls >> v.x >> v.y >> v.z))
        throw MeshError("obj: bad vertex at line " + std::to_string(lineno));
      verts.push_back(v);
    } else if (tag == "f") {
      std::vector<long> idx;
      std::string tok;
      while (ls >> tok) {
        // accept "i", "i/t", "i/t/n", "i//n"
        const auto slash = tok.find('/');
        const std::string head = slash == std::string::npos ? tok : tok.substr(0, slash);
        try {
          idx.push_back(std::stol(head));
        } catch (const std::exception&) {
          throw MeshError("obj: bad face index at line " + std::to_string(lineno));
        }
      }
      if (idx.size() < 3) throw MeshError("obj: face with <3 vertices at line " + std::to_string(lineno));
      auto resolve = [&](long i) -> uint32_t {
        const long n = static_cast<long>(verts.size());
        long r = i > 0 ? i - 1 : n + i;
        if (r < 0 || r >= n) throw MeshError("obj: index out of range at line " + std::to_string(lineno));
        return static_cast<uint32_t>(r);
      };
      // triangle fan for polygons
      for (std::size_t k = 2; k < idx.size(); ++k)
        tris.push_back({resolve(idx[0]), resolve(idx[k - 1]), resolve(idx[k])});
    }
  }
  if (tris.empty()) throw MeshError("obj: no faces");
  return make_mesh(std::move(verts), tris, role);
}

inline TriMesh load_stl(std::istream& in, MeshRole role) {
  // Peek the header to tell ASCII from binary.
  std::string header(5, '\0');
  in.read(header.data(), 5);
  if (!in) throw MeshError("stl: truncated header");

  std::vector<Vec3> verts;
  std::vector<std::array<uint32_t, 3>> tris;
  auto add_tri = [&](const Vec3& a, const Vec3& b, const Vec3& c) {
    const auto base = static_cast<uint32_t>(verts.size());
    verts.push_back(a);
    verts.push_back(b);
    verts.push_back(c);
    tris.push_back({base, base + 1, base + 2});
  };

  if (header == "solid") {
    std::string rest;
    std::getline(in, rest);
    std::string tok;
    std::vector<Vec3> cur;
    while (in >> tok) {
      if (tok == "vertex") {
        Vec3 v;
        if (!(in >> v.x >> v.y >> v.z)) throw MeshError("stl: bad vertex");
        cur.push_back(v);
      } else if (tok == "endfacet") {
        if (cur.size() != 3) throw MeshError("stl: facet without 3 vertices");
        add_tri(cur[0], cur[1], cur[2]);
        cur.clear();
      }
    }
    if (!cur.empty()) throw MeshError("stl: unterminated facet");
  } else {
    char skip[75];
    in.read(skip, 75);  // remainder of the 80-byte header
    uint32_t count = 0;
    in.read(reinterpret_cast<char*>(&count), 4);
    if (!in) throw MeshError("stl: truncated header");
    for (uint32_t i = 0; i < count; ++i) {
      float buf[12];
      in.read(reinterpret_cast<char*>(buf), 48);
      uint16_t attr;
      in.read(reinterpret_cast<char*>(&attr), 2);
      if (!in) throw MeshError("stl: truncated triangle data");
      add_tri({buf[3], buf[4], buf[5]}, {buf[6], buf[7], buf[8]}, {buf[9], buf[10], buf[11]});
    }
  }
  if (tris.empty()) throw MeshError("stl: no faces");
  return make_mesh(std::move(verts), tris, role);
}

}  // namespace detail

inline TriMesh load_mesh(std::istream& in, MeshFormat fmt,
                         MeshRole role = MeshRole::inspection_object) {
  switch (fmt) {
    case MeshFormat::obj:
      return detail::load_obj(in, role);
    case MeshFormat::stl:
      return detail::load_stl(in, role);
  }
  throw MeshError("unknown mesh format");
}

inline MeshFormat format_from_path(const std::string& path) {
  const auto dot = path.rfind('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == "obj") return MeshFormat::obj;
  if (ext == "stl") return MeshFormat::stl;
  throw MeshError("cannot infer mesh format from path: " + path);
}

// Assigns region weights by centroid membership; faces outside every region
// keep weight 1. Later regions override earlier ones. Returns the number of
// faces matched by each region (a zero means the selector was empty).
inline std::vector<std::size_t> apply_weights(TriMesh& mesh,
                                              const std::vector<RegionSpec>& regions) {
  for (auto& f : mesh.faces) f.weight = 1;
  std::vector<std::size_t> matched(regions.size(), 0);
  for (std::size_t r = 0; r < regions.size(); ++r) {
    const auto& spec = regions[r];
    if (spec.weight < 1) throw MeshError("region weight must be >= 1");
    if (const auto* box = std::get_if<Aabb>(&spec.selector)) {
      for (auto& f : mesh.faces) {
        if (box->contains(f.centroid)) {
          f.weight = spec.weight;
          ++matched[r];
        }
      }
    } else {
      for (uint32_t idx : std::get<std::vector<uint32_t>>(spec.selector)) {
        if (idx >= mesh.faces.size()) throw MeshError("region face index out of range");
        mesh.faces[idx].weight = spec.weight;
        ++matched[r];
      }
    }
  }
  return matched;
}

// True iff any face other than `exclude` crosses the open segment (p, q).
// Brute-force scan; the BVH-backed variant in occlusion.hpp must agree.
inline bool segment_occluded_brute(const Vec3& p, const Vec3& q, const TriMesh& mesh,
                                   int64_t exclude = -1) {
  constexpr double kEps = 1e-6;
  for (std::size_t j = 0; j < mesh.faces.size(); ++j) {
    if (static_cast<int64_t>(j) == exclude) continue;
    const auto [v0, v1, v2] = face_corners(mesh, mesh.faces[j]);
    const double t = segment_triangle_hit(p, q, v0, v1, v2);
    if (t > kEps && t < 1.0 - kEps) return true;
  }
  return false;
}

}  // namespace ipp
