#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ipp/config.hpp"
#include "ipp/io.hpp"

namespace ipp {

struct Scene {
  TriMesh object;                 // the inspection target
  std::vector<TriMesh> obstacles; // environment meshes (safety filtering only)
  std::optional<BridgeSpec> bridge;

  std::vector<TriMesh> all() const {
    std::vector<TriMesh> out{object};
    out.insert(out.end(), obstacles.begin(), obstacles.end());
    return out;
  }
};

inline Scene build_scene(const RunConfig& cfg) {
  Scene s;
  if (cfg.bridge) {
    s.object = generate_bridge(*cfg.bridge);
    s.bridge = cfg.bridge;
  } else {
    std::ifstream in(*cfg.mesh_file, std::ios::binary);
    if (!in) throw MeshError("cannot open mesh file: " + *cfg.mesh_file);
    s.object = load_mesh(in, format_from_path(*cfg.mesh_file));
  }
  apply_weights(s.object, cfg.regions);
  return s;
}

inline GridSpec resolve_grid(const RunConfig& cfg, const Scene& scene) {
  if (cfg.grid) return *cfg.grid;
  const double pad = cfg.grid_padding.value_or(cfg.visible_distance);
  return default_grid(scene.all(), cfg.grid_interval, pad);
}

// Span template derived from the synthetic bridge when none is configured:
// one interval per span along x, split at deck-top height.
inline SpanTemplate bridge_template(const BridgeSpec& b) {
  SpanTemplate t;
  t.axis = 0;
  t.deck_height = b.deck_top();
  for (int s = 0; s < b.spans; ++s)
    t.spans.push_back({s * b.span_length, (s + 1) * b.span_length});
  return t;
}

struct FaceVisitReport {
  std::vector<uint32_t> visits;  // distinct seeing path vertices + in-FOV pose hits
};

inline FaceVisitReport face_visits(const InspectionPath& path, const VisibilityMatrix& vm,
                                   const TriMesh& mesh, const std::vector<CameraPose>& poses,
                                   const PoseParams& pose_params) {
  FaceVisitReport r;
  r.visits.assign(mesh.faces.size(), 0);
  for (uint32_t v : path.distinct_vertices())
    for (std::size_t j = 0; j < mesh.faces.size(); ++j)
      if (vm.get(v, j)) ++r.visits[j];
  for (const auto& p : poses)
    for (uint32_t k : pose_visible_set(p, vm, mesh, pose_params)) ++r.visits[k];
  return r;
}

inline void emit_heatmap(const FaceVisitReport& report, const TriMesh& mesh,
                         const std::string& csv_path, const std::string& ply_path) {
  if (report.visits.size() != mesh.faces.size())
    throw std::invalid_argument("visit report does not match the mesh");
  std::ostringstream csv;
  csv << "face,centroid_x,centroid_y,centroid_z,weight,visits\n";
  for (std::size_t j = 0; j < mesh.faces.size(); ++j) {
    const auto& f = mesh.faces[j];
    csv << j << "," << f.centroid.x << "," << f.centroid.y << "," << f.centroid.z << ","
        << f.weight << "," << report.visits[j] << "\n";
  }
  write_file(csv_path, csv.str());
  std::ofstream ply(ply_path, std::ios::binary);
  if (!ply) throw std::runtime_error("cannot open for writing: " + ply_path);
  save_ply_with_face_scalar(mesh, report.visits, ply);
}

struct RunResult {
  bool feasible = false;
  double coverage = 0.0;
  double length = 0.0;
  std::size_t pose_count = 0;
  double wall_time_s = 0.0;
  uint64_t seed = 0;
};

// Full pipeline: scene -> graph -> visibility (cache-aware) -> GA -> poses.
// Writes path.json, mission.json, stats.csv, heatmap.csv/.ply and summary.json
// into cfg.output_dir.
inline RunResult run_plan(const RunConfig& cfg, bool force_recompute = false) {
  cfg.validate();
  namespace fs = std::filesystem;
  const auto t0 = std::chrono::steady_clock::now();
  fs::create_directories(cfg.output_dir);

  const Scene scene = build_scene(cfg);
  const GridSpec grid = resolve_grid(cfg, scene);
  const ViewpointGraph graph =
      build_graph(grid, scene.all(), cfg.safety_distance, cfg.no_fly_zones);

  const VisibilityParams vis = cfg.visibility_params();
  const fs::path cache = fs::path(cfg.output_dir) / "visibility.cache";
  VisibilityMatrix vm;
  bool from_cache = false;
  if (!force_recompute && fs::exists(cache)) {
    std::ifstream in(cache, std::ios::binary);
    try {
      vm = load_matrix_checked(in, graph, scene.object, vis);
      from_cache = true;
    } catch (const CacheError&) {
      from_cache = false;  // stale or corrupt: recompute below
    }
  }
  if (!from_cache) {
    vm = compute_visibility(graph, scene.object, vis, cfg.workers);
    std::ofstream out(cache, std::ios::binary);
    save_matrix(vm, out);
  }

  std::optional<SpanTemplate> tmpl = cfg.rule_template;
  if (!tmpl && scene.bridge) tmpl = bridge_template(*scene.bridge);

  std::vector<bool> mask;
  const std::vector<bool>* mask_ptr = nullptr;
  if (cfg.restrict_coverage_to_reachable) {
    mask = reachable_faces(vm, scene.object);
    mask_ptr = &mask;
  }

  const EvolveResult res = evolve(cfg.ga, graph, vm, scene.object, tmpl, mask_ptr);
  const auto poses = greedy_poses(res.best.path, vm, scene.object, graph, cfg.pose_params());
  const auto report = face_visits(res.best.path, vm, scene.object, poses, cfg.pose_params());

  const auto dir = fs::path(cfg.output_dir);
  write_file((dir / "path.json").string(),
             path_to_json(res.best.path, graph, res.best.length, res.best.coverage).dump(2));
  write_file((dir / "mission.json").string(), mission_to_json(poses).dump(2));
  std::ostringstream stats;
  stats_to_csv(res.stats, stats);
  write_file((dir / "stats.csv").string(), stats.str());
  emit_heatmap(report, scene.object, (dir / "heatmap.csv").string(),
               (dir / "heatmap.ply").string());

  RunResult rr;
  rr.feasible = res.feasible;
  rr.coverage = res.best.coverage;
  rr.length = res.best.length;
  rr.pose_count = poses.size();
  rr.seed = cfg.ga.seed;
  rr.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  write_file((dir / "summary.json").string(),
             json{{"feasible", rr.feasible},
                  {"coverage", rr.coverage},
                  {"length_m", rr.length},
                  {"pose_count", rr.pose_count},
                  {"wall_time_s", rr.wall_time_s},
                  {"seed", rr.seed}}
                 .dump(2));
  return rr;
}

struct SweepSpec {
  std::string parameter;        // one of the recognized GA / pose parameters
  std::vector<double> values;
  std::size_t repetitions = 1;
};

inline void apply_override(RunConfig& cfg, const std::string& name, double value) {
  if (name == "ier")
    cfg.ga.ier = value;
  else if (name == "ger")
    cfg.ga.ger = value;
  else if (name == "tournament_size")
    cfg.ga.tournament_size = static_cast<std::size_t>(value);
  else if (name == "rule_based_initialization_proportion")
    cfg.ga.rule_init_proportion = value;
  else if (name == "population_size")
    cfg.ga.population_size = static_cast<std::size_t>(value);
  else if (name == "generations")
    cfg.ga.generations = static_cast<std::size_t>(value);
  else if (name == "coverage_goal")
    cfg.ga.coverage_goal = value;
  else if (name == "fov")
    cfg.fov = value;
  else
    throw ConfigError("unknown sweep parameter: " + name);
}

struct SweepRow {
  std::string parameter;
  double value = 0.0;
  std::size_t rep = 0;
  bool ok = false;
  RunResult result;
  std::string error;
};

// One run per value x repetition; repetition r uses base seed + r. Failures
// are recorded and the sweep continues.
inline std::vector<SweepRow> run_sweep(const RunConfig& base, const SweepSpec& sweep) {
  std::vector<SweepRow> rows;
  for (double value : sweep.values) {
    for (std::size_t rep = 0; rep < sweep.repetitions; ++rep) {
      RunConfig cfg = base;
      apply_override(cfg, sweep.parameter, value);
      cfg.ga.seed = base.ga.seed + rep;
      std::ostringstream cell;
      cell << sweep.parameter << "_" << value << "_rep" << rep;
      cfg.output_dir = (std::filesystem::path(base.output_dir) / cell.str()).string();
      SweepRow row;
      row.parameter = sweep.parameter;
      row.value = value;
      row.rep = rep;
      try {
        row.result = run_plan(cfg);
        row.ok = true;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

inline void sweep_to_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "param,value,rep,length,coverage,poses,runtime,feasible,error\n";
  for (const auto& r : rows) {
    out << r.parameter << "," << r.value << "," << r.rep << ",";
    if (r.ok)
      out << r.result.length << "," << r.result.coverage << "," << r.result.pose_count << ","
          << r.result.wall_time_s << "," << (r.result.feasible ? 1 : 0) << ",";
    else
      out << ",,,,,\"" << r.error << "\"";
    out << "\n";
  }
}

}  // namespace ipp
