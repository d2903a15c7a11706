#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "ipp/mesh.hpp"

namespace ipp {

// Synthetic multi-span box-girder bridge. The deck is one deep box resting on
// snapped pier columns; contact faces (pier tops and the deck-bottom cells in
// each pier footprint) are omitted so every emitted face is reachable by a
// line of sight. Skew shears the whole model in plan.
struct BridgeSpec {
  int spans = 3;
  double span_length = 8.4;   // m
  double deck_width = 7.0;    // m
  double deck_depth = 1.5;    // m, box girder depth incl. slab
  double clearance = 4.0;     // m, ground to deck soffit
  double pier_size = 1.0;     // m, target square cross-section before snapping
  double skew_deg = 0.0;
  double cell = 1.4;          // m, target tessellation cell size
  double cell_y = 0.0;        // optional override for the transverse axis

  double length() const { return spans * span_length; }
  double deck_top() const { return clearance + deck_depth; }
};

namespace detail {

class BridgeBuilder {
 public:
  explicit BridgeBuilder(double shear) : shear_(shear) {}

  // Planar quad grid spanning origin + u*du*nu + v*dv*nv, each cell split into
  // two triangles. `skip(iu, iv)` suppresses individual cells. Winding follows
  // du x dv; pass flipped axes for inward-facing rectangles.
  void grid(const Vec3& origin, const Vec3& du, const Vec3& dv, int nu, int nv,
            const std::function<bool(int, int)>& skip = nullptr) {
    for (int iu = 0; iu < nu; ++iu) {
      for (int iv = 0; iv < nv; ++iv) {
        if (skip && skip(iu, iv)) continue;
        const uint32_t a = vertex(origin + du * iu + dv * iv);
        const uint32_t b = vertex(origin + du * (iu + 1) + dv * iv);
        const uint32_t c = vertex(origin + du * (iu + 1) + dv * (iv + 1));
        const uint32_t d = vertex(origin + du * iu + dv * (iv + 1));
        tris_.push_back({a, b, c});
        tris_.push_back({a, c, d});
      }
    }
  }

  TriMesh finish() const { return make_mesh(verts_, tris_); }

 private:
  uint32_t vertex(const Vec3& p) {
    const Vec3 s{p.x + shear_ * p.y, p.y, p.z};
    const auto key = std::make_tuple(std::llround(s.x * 1e6), std::llround(s.y * 1e6),
                                     std::llround(s.z * 1e6));
    auto [it, inserted] = index_.try_emplace(key, static_cast<uint32_t>(verts_.size()));
    if (inserted) verts_.push_back(s);
    return it->second;
  }

  double shear_;
  std::map<std::tuple<long long, long long, long long>, uint32_t> index_;
  std::vector<Vec3> verts_;
  std::vector<std::array<uint32_t, 3>> tris_;
};

}  // namespace detail

inline TriMesh generate_bridge(const BridgeSpec& spec) {
  if (spec.spans < 1 || spec.span_length <= 0 || spec.deck_width <= 0 || spec.deck_depth <= 0 ||
      spec.clearance <= 0 || spec.pier_size <= 0 || spec.cell <= 0)
    throw MeshError("bridge spec: all dimensions must be positive");

  const double L = spec.length();
  const double W = spec.deck_width;
  const double D = spec.deck_depth;
  const double cy_target = spec.cell_y > 0 ? spec.cell_y : spec.cell;

  const int nx = std::max(1, static_cast<int>(std::lround(L / spec.cell)));
  const int ny = std::max(1, static_cast<int>(std::lround(W / cy_target)));
  const int nzd = std::max(1, static_cast<int>(std::lround(D / spec.cell)));
  const int nzp = std::max(1, static_cast<int>(std::lround(spec.clearance / spec.cell)));
  const double cx = L / nx;
  const double cy = W / ny;

  detail::BridgeBuilder b(std::tan(deg_to_rad(spec.skew_deg)));

  // Pier footprints snapped to deck-bottom cells. One support per span
  // boundary, including both abutment lines.
  struct Footprint {
    int ix0, ix1, iy0, iy1;  // half-open cell ranges
  };
  std::vector<Footprint> piers;
  const int iy_mid = ny / 2;
  for (int s = 0; s <= spec.spans; ++s) {
    const double x_support = std::clamp(s * spec.span_length, spec.pier_size / 2.0,
                                        L - spec.pier_size / 2.0);
    const double half = spec.pier_size / 2.0;
    int ix0 = static_cast<int>(std::floor((x_support - half) / cx + 1e-9));
    int ix1 = static_cast<int>(std::ceil((x_support + half) / cx - 1e-9));
    ix0 = std::clamp(ix0, 0, nx - 1);
    ix1 = std::clamp(ix1, ix0 + 1, nx);
    int span_y = std::max(1, static_cast<int>(std::lround(spec.pier_size / cy)));
    int iy0 = std::clamp(iy_mid - span_y / 2, 0, ny - 1);
    int iy1 = std::clamp(iy0 + span_y, iy0 + 1, ny);
    piers.push_back({ix0, ix1, iy0, iy1});
  }

  auto in_footprint = [&](int ix, int iy) {
    for (const auto& p : piers)
      if (ix >= p.ix0 && ix < p.ix1 && iy >= p.iy0 && iy < p.iy1) return true;
    return false;
  };

  const double z0 = spec.clearance;
  const double z1 = spec.deck_top();
  const Vec3 ex{cx, 0, 0}, ey{0, cy, 0};
  const Vec3 ezd{0, 0, D / nzd};
  const Vec3 ezp{0, 0, spec.clearance / nzp};

  // Deck box: top up, bottom down minus pier footprints, four sides outward.
  b.grid({0, 0, z1}, ex, ey, nx, ny);
  b.grid({0, 0, z0}, ey, ex, ny, nx,
         [&](int iu, int iv) { return in_footprint(iv, iu); });
  b.grid({0, 0, z0}, ex, ezd, nx, nzd);
  b.grid({0, W, z0}, ezd, ex, nzd, nx);
  b.grid({0, 0, z0}, ezd, ey, nzd, ny);
  b.grid({L, 0, z0}, ey, ezd, ny, nzd);

  // Pier columns: four walls and a bottom; the top is the omitted contact.
  for (const auto& p : piers) {
    const double xlo = p.ix0 * cx, xhi = p.ix1 * cx;
    const double ylo = p.iy0 * cy, yhi = p.iy1 * cy;
    const int nu = p.ix1 - p.ix0, nv = p.iy1 - p.iy0;
    b.grid({xlo, ylo, 0}, ex, ezp, nu, nzp);
    b.grid({xlo, yhi, 0}, ezp, ex, nzp, nu);
    b.grid({xlo, ylo, 0}, ezp, ey, nzp, nv);
    b.grid({xhi, ylo, 0}, ey, ezp, nv, nzp);
    b.grid({xlo, ylo, 0}, ey, ex, nv, nu);
  }

  return b.finish();
}

}  // namespace ipp
