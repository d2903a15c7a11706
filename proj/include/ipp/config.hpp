#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ipp/bridge.hpp"
#include "ipp/ga.hpp"
#include "ipp/grid.hpp"
#include "ipp/io.hpp"
#include "ipp/pose.hpp"
#include "ipp/visibility.hpp"

namespace ipp {

// Full run configuration, read from a single JSON document. Keys for the
// problem parameters match their usual names (grid_interval, visible_distance,
// safety_distance, visible_inclination_angle, ier, ger, tournament_size,
// rule_based_initialization_proportion, population_size, generations,
// coverage_goal, fov).
struct RunConfig {
  std::optional<std::string> mesh_file;
  std::optional<BridgeSpec> bridge;

  double grid_interval = 1.0;
  double visible_distance = 10.0;
  double safety_distance = 0.5;
  double visible_inclination_angle = 45.0;
  bool occlusion_enabled = true;

  std::optional<GridSpec> grid;           // default: model bounds + padding
  std::optional<double> grid_padding;     // default: visible_distance
  std::vector<NoFlyZone> no_fly_zones;
  std::vector<RegionSpec> regions;
  bool restrict_coverage_to_reachable = false;

  GAConfig ga;
  std::optional<SpanTemplate> rule_template;  // default: derived from bridge

  double fov = 90.0;
  bool fov_literal = true;

  std::size_t repetitions = 1;
  std::string output_dir = ".";
  unsigned workers = 0;  // 0: hardware concurrency

  VisibilityParams visibility_params() const {
    return {visible_distance, visible_inclination_angle, occlusion_enabled};
  }
  PoseParams pose_params() const { return {fov, fov_literal}; }

  void validate() const {
    if (!mesh_file && !bridge)
      throw ConfigError("config needs either a mesh_file or a bridge generator block");
    if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
    visibility_params().validate();
    pose_params().validate();
    ga.validate();
  }
};

namespace detail {

inline Aabb box_from_json(const json& j) {
  Aabb b;
  b.min = vec_from_json(j.at("min"));
  b.max = vec_from_json(j.at("max"));
  if (b.min.x > b.max.x || b.min.y > b.max.y || b.min.z > b.max.z)
    throw ConfigError("box min must be <= max per axis");
  return b;
}

template <class T>
void maybe(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace detail

inline RunConfig parse_config(const json& j) {
  RunConfig c;
  if (j.contains("mesh_file")) c.mesh_file = j.at("mesh_file").get<std::string>();
  if (j.contains("bridge")) {
    const auto& b = j.at("bridge");
    BridgeSpec s;
    detail::maybe(b, "spans", s.spans);
    detail::maybe(b, "span_length", s.span_length);
    detail::maybe(b, "deck_width", s.deck_width);
    detail::maybe(b, "deck_depth", s.deck_depth);
    detail::maybe(b, "clearance", s.clearance);
    detail::maybe(b, "pier_size", s.pier_size);
    detail::maybe(b, "skew_deg", s.skew_deg);
    detail::maybe(b, "cell", s.cell);
    detail::maybe(b, "cell_y", s.cell_y);
    c.bridge = s;
  }

  detail::maybe(j, "grid_interval", c.grid_interval);
  detail::maybe(j, "visible_distance", c.visible_distance);
  detail::maybe(j, "safety_distance", c.safety_distance);
  detail::maybe(j, "visible_inclination_angle", c.visible_inclination_angle);
  detail::maybe(j, "occlusion_enabled", c.occlusion_enabled);
  detail::maybe(j, "restrict_coverage_to_reachable", c.restrict_coverage_to_reachable);

  if (j.contains("grid")) {
    GridSpec gs;
    gs.origin = vec_from_json(j.at("grid").at("origin"));
    gs.extents = vec_from_json(j.at("grid").at("extents"));
    gs.interval = c.grid_interval;
    c.grid = gs;
  }
  if (j.contains("grid_padding")) c.grid_padding = j.at("grid_padding").get<double>();

  if (j.contains("no_fly_zones"))
    for (const auto& z : j.at("no_fly_zones")) c.no_fly_zones.push_back({detail::box_from_json(z)});

  if (j.contains("regions")) {
    for (const auto& r : j.at("regions")) {
      RegionSpec spec;
      spec.weight = r.at("weight").get<uint32_t>();
      if (r.contains("box"))
        spec.selector = detail::box_from_json(r.at("box"));
      else if (r.contains("faces"))
        spec.selector = r.at("faces").get<std::vector<uint32_t>>();
      else
        throw ConfigError("region needs a box or a faces list");
      c.regions.push_back(std::move(spec));
    }
  }

  if (j.contains("ga")) {
    const auto& g = j.at("ga");
    detail::maybe(g, "population_size", c.ga.population_size);
    detail::maybe(g, "generations", c.ga.generations);
    detail::maybe(g, "ier", c.ga.ier);
    detail::maybe(g, "ger", c.ga.ger);
    detail::maybe(g, "tournament_size", c.ga.tournament_size);
    detail::maybe(g, "rule_based_initialization_proportion", c.ga.rule_init_proportion);
    detail::maybe(g, "coverage_goal", c.ga.coverage_goal);
    detail::maybe(g, "alpha", c.ga.alpha);
    detail::maybe(g, "seed", c.ga.seed);
    detail::maybe(g, "initial_path_points", c.ga.initial_path_points);
  }

  if (j.contains("rule_template")) {
    const auto& t = j.at("rule_template");
    SpanTemplate st;
    if (t.contains("axis")) {
      const std::string a = t.at("axis").get<std::string>();
      st.axis = a == "x" ? 0 : a == "y" ? 1 : 2;
    }
    for (const auto& s : t.at("spans"))
      st.spans.push_back({s.at(0).get<double>(), s.at(1).get<double>()});
    detail::maybe(t, "loops_per_span", st.loops_per_span);
    st.deck_height = t.at("deck_height").get<double>();
    c.rule_template = st;
  }

  detail::maybe(j, "fov", c.fov);
  detail::maybe(j, "fov_literal", c.fov_literal);
  detail::maybe(j, "repetitions", c.repetitions);
  detail::maybe(j, "output_dir", c.output_dir);
  detail::maybe(j, "workers", c.workers);

  c.validate();
  return c;
}

inline RunConfig load_config(const std::string& path) {
  return parse_config(json::parse(read_file(path)));
}

}  // namespace ipp
