// Command-line front end: plan / poses / sweep / visibility / heatmap /
// gen-bridge subcommands over a single JSON run configuration.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ipp/config.hpp"
#include "ipp/runner.hpp"

namespace fs = std::filesystem;

namespace {

int cmd_plan(const std::string& config_path, const std::string& output_dir, int64_t seed,
             bool force_recompute) {
  ipp::RunConfig cfg = ipp::load_config(config_path);
  if (!output_dir.empty()) cfg.output_dir = output_dir;
  if (seed >= 0) cfg.ga.seed = static_cast<uint64_t>(seed);
  const ipp::RunResult r = ipp::run_plan(cfg, force_recompute);
  std::cout << "coverage=" << r.coverage << " length=" << r.length << "m poses=" << r.pose_count
            << " feasible=" << (r.feasible ? "yes" : "no") << " wall=" << r.wall_time_s << "s\n";
  return r.feasible ? 0 : 2;
}

int cmd_visibility(const std::string& config_path, const std::string& output_dir) {
  ipp::RunConfig cfg = ipp::load_config(config_path);
  if (!output_dir.empty()) cfg.output_dir = output_dir;
  fs::create_directories(cfg.output_dir);
  const ipp::Scene scene = ipp::build_scene(cfg);
  const ipp::GridSpec grid = ipp::resolve_grid(cfg, scene);
  const ipp::ViewpointGraph graph =
      ipp::build_graph(grid, scene.all(), cfg.safety_distance, cfg.no_fly_zones);
  const auto vm = ipp::compute_visibility(graph, scene.object, cfg.visibility_params(),
                                          cfg.workers);
  std::ofstream out(fs::path(cfg.output_dir) / "visibility.cache", std::ios::binary);
  ipp::save_matrix(vm, out);
  ipp::write_file((fs::path(cfg.output_dir) / "graph.json").string(),
                  ipp::graph_to_json(graph).dump());
  std::cout << "viewpoints=" << graph.size() << " faces=" << scene.object.faces.size() << "\n";
  return 0;
}

int cmd_poses(const std::string& config_path, const std::string& path_file, double fov,
              const std::string& output_dir) {
  ipp::RunConfig cfg = ipp::load_config(config_path);
  if (!output_dir.empty()) cfg.output_dir = output_dir;
  if (fov > 0) cfg.fov = fov;
  fs::create_directories(cfg.output_dir);
  const ipp::Scene scene = ipp::build_scene(cfg);
  const ipp::GridSpec grid = ipp::resolve_grid(cfg, scene);
  const ipp::ViewpointGraph graph =
      ipp::build_graph(grid, scene.all(), cfg.safety_distance, cfg.no_fly_zones);
  const auto vm = ipp::compute_visibility(graph, scene.object, cfg.visibility_params(),
                                          cfg.workers);
  const ipp::InspectionPath path =
      ipp::path_from_json(ipp::json::parse(ipp::read_file(path_file)));
  const auto poses = ipp::greedy_poses(path, vm, scene.object, graph, cfg.pose_params());
  ipp::write_file((fs::path(cfg.output_dir) / "mission.json").string(),
                  ipp::mission_to_json(poses).dump(2));
  std::cout << "poses=" << poses.size() << "\n";
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& param,
              const std::vector<double>& values, std::size_t reps,
              const std::string& output_dir) {
  ipp::RunConfig cfg = ipp::load_config(config_path);
  if (!output_dir.empty()) cfg.output_dir = output_dir;
  ipp::SweepSpec spec{param, values, reps};
  const auto rows = ipp::run_sweep(cfg, spec);
  std::ostringstream csv;
  ipp::sweep_to_csv(rows, csv);
  fs::create_directories(cfg.output_dir);
  ipp::write_file((fs::path(cfg.output_dir) / "sweep.csv").string(), csv.str());
  std::size_t failures = 0;
  for (const auto& r : rows)
    if (!r.ok) ++failures;
  std::cout << "rows=" << rows.size() << " failures=" << failures << "\n";
  return failures == 0 ? 0 : 2;
}

int cmd_heatmap(const std::string& config_path, const std::string& path_file,
                const std::string& output_dir) {
  ipp::RunConfig cfg = ipp::load_config(config_path);
  if (!output_dir.empty()) cfg.output_dir = output_dir;
  fs::create_directories(cfg.output_dir);
  const ipp::Scene scene = ipp::build_scene(cfg);
  const ipp::GridSpec grid = ipp::resolve_grid(cfg, scene);
  const ipp::ViewpointGraph graph =
      ipp::build_graph(grid, scene.all(), cfg.safety_distance, cfg.no_fly_zones);
  const auto vm = ipp::compute_visibility(graph, scene.object, cfg.visibility_params(),
                                          cfg.workers);
  const ipp::InspectionPath path =
      ipp::path_from_json(ipp::json::parse(ipp::read_file(path_file)));
  const auto poses = ipp::greedy_poses(path, vm, scene.object, graph, cfg.pose_params());
  const auto report = ipp::face_visits(path, vm, scene.object, poses, cfg.pose_params());
  ipp::emit_heatmap(report, scene.object, (fs::path(cfg.output_dir) / "heatmap.csv").string(),
                    (fs::path(cfg.output_dir) / "heatmap.ply").string());
  std::cout << "faces=" << scene.object.faces.size() << "\n";
  return 0;
}

int cmd_gen_bridge(const ipp::BridgeSpec& spec, const std::string& out_path) {
  const ipp::TriMesh mesh = ipp::generate_bridge(spec);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot open " << out_path << "\n";
    return 1;
  }
  ipp::save_obj(mesh, out);
  std::cout << "faces=" << mesh.faces.size() << " area=" << mesh.total_area() << "m^2\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UAS inspection path planner"};
  app.require_subcommand(1);

  std::string config_path, output_dir, path_file, param, out_path = "bridge.obj";
  int64_t seed = -1;
  bool force = false;
  double fov = 0.0;
  std::vector<double> values;
  std::size_t reps = 1;
  ipp::BridgeSpec bridge;

  auto* plan = app.add_subcommand("plan", "run the full planning pipeline");
  plan->add_option("-c,--config", config_path, "run configuration (JSON)")->required();
  plan->add_option("-o,--output", output_dir, "output directory override");
  plan->add_option("--seed", seed, "GA seed override");
  plan->add_flag("--force-recompute", force, "ignore any visibility cache");

  auto* vis = app.add_subcommand("visibility", "precompute the visibility cache");
  vis->add_option("-c,--config", config_path)->required();
  vis->add_option("-o,--output", output_dir);

  auto* poses = app.add_subcommand("poses", "re-solve poses on an existing path");
  poses->add_option("-c,--config", config_path)->required();
  poses->add_option("-p,--path", path_file, "path.json from a previous plan")->required();
  poses->add_option("--fov", fov, "FOV override (degrees)");
  poses->add_option("-o,--output", output_dir);

  auto* sweep = app.add_subcommand("sweep", "parameter sweep with repetitions");
  sweep->add_option("-c,--config", config_path)->required();
  sweep->add_option("--param", param, "parameter to sweep")->required();
  sweep->add_option("--values", values, "values to sweep over")->required();
  sweep->add_option("--reps", reps, "repetitions per value");
  sweep->add_option("-o,--output", output_dir);

  auto* heat = app.add_subcommand("heatmap", "face-visit heatmap for a path");
  heat->add_option("-c,--config", config_path)->required();
  heat->add_option("-p,--path", path_file)->required();
  heat->add_option("-o,--output", output_dir);

  auto* gen = app.add_subcommand("gen-bridge", "emit the synthetic bridge as OBJ");
  gen->add_option("--spans", bridge.spans);
  gen->add_option("--span-length", bridge.span_length);
  gen->add_option("--deck-width", bridge.deck_width);
  gen->add_option("--deck-depth", bridge.deck_depth);
  gen->add_option("--clearance", bridge.clearance);
  gen->add_option("--pier-size", bridge.pier_size);
  gen->add_option("--skew", bridge.skew_deg);
  gen->add_option("--cell", bridge.cell);
  gen->add_option("--out", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (plan->parsed()) return cmd_plan(config_path, output_dir, seed, force);
    if (vis->parsed()) return cmd_visibility(config_path, output_dir);
    if (poses->parsed()) return cmd_poses(config_path, path_file, fov, output_dir);
    if (sweep->parsed()) return cmd_sweep(config_path, param, values, reps, output_dir);
    if (heat->parsed()) return cmd_heatmap(config_path, path_file, output_dir);
    if (gen->parsed()) return cmd_gen_bridge(bridge, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
