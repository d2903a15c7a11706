#pragma once

#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ipp/ga.hpp"
#include "ipp/grid.hpp"
#include "ipp/mesh.hpp"
#include "ipp/path.hpp"
#include "ipp/pose.hpp"

namespace ipp {

using json = nlohmann::ordered_json;

inline json vec_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

inline Vec3 vec_from_json(const json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

// Waypoints with consecutive duplicates collapsed, plus path metrics.
inline json path_to_json(const InspectionPath& p, const ViewpointGraph& g, double length,
                         double coverage) {
  json waypoints = json::array();
  json indices = json::array();
  uint32_t prev = UINT32_MAX;
  for (uint32_t v : p.vertex_indices) {
    if (v == prev) continue;
    prev = v;
    waypoints.push_back(vec_to_json(g.viewpoints[v]));
    indices.push_back(v);
  }
  return json{{"waypoints", waypoints},
              {"vertex_indices", indices},
              {"length_m", length},
              {"coverage", coverage}};
}

inline InspectionPath path_from_json(const json& j) {
  InspectionPath p;
  for (const auto& v : j.at("vertex_indices")) p.vertex_indices.push_back(v.get<uint32_t>());
  return p;
}

inline json mission_to_json(const std::vector<CameraPose>& poses) {
  json records = json::array();
  for (const auto& p : poses) {
    records.push_back(json{{"x", p.position.x},
                           {"y", p.position.y},
                           {"z", p.position.z},
                           {"sight_x", p.sight.x},
                           {"sight_y", p.sight.y},
                           {"sight_z", p.sight.z},
                           {"yaw_deg", rad_to_deg(std::atan2(p.sight.y, p.sight.x))},
                           {"pitch_deg", rad_to_deg(std::asin(std::clamp(p.sight.z, -1.0, 1.0)))}});
  }
  return json{{"poses", records}};
}

inline json graph_to_json(const ViewpointGraph& g) {
  json points = json::array();
  json adjacency = json::array();
  for (std::size_t i = 0; i < g.size(); ++i) {
    points.push_back(vec_to_json(g.viewpoints[i]));
    adjacency.push_back(g.adjacency[i]);
  }
  return json{{"interval", g.interval}, {"viewpoints", points}, {"adjacency", adjacency}};
}

inline void save_obj(const TriMesh& mesh, std::ostream& out) {
  out << "# " << mesh.vertices.size() << " vertices, " << mesh.faces.size() << " faces\n";
  for (const auto& v : mesh.vertices) out << "v " << v.x << " " << v.y << " " << v.z << "\n";
  for (const auto& f : mesh.faces)
    out << "f " << f.vertex_indices[0] + 1 << " " << f.vertex_indices[1] + 1 << " "
        << f.vertex_indices[2] + 1 << "\n";
}

// ASCII PLY with a per-face scalar channel (visit counts for heatmaps).
inline void save_ply_with_face_scalar(const TriMesh& mesh, const std::vector<uint32_t>& scalar,
                                      std::ostream& out, const std::string& name = "visits") {
  out << "ply\nformat ascii 1.0\n";
  out << "element vertex " << mesh.vertices.size() << "\n";
  out << "property float x\nproperty float y\nproperty float z\n";
  out << "element face " << mesh.faces.size() << "\n";
  out << "property list uchar int vertex_indices\n";
  out << "property uint " << name << "\n";
  out << "end_header\n";
  for (const auto& v : mesh.vertices) out << v.x << " " << v.y << " " << v.z << "\n";
  for (std::size_t j = 0; j < mesh.faces.size(); ++j) {
    const auto& f = mesh.faces[j];
    out << "3 " << f.vertex_indices[0] << " " << f.vertex_indices[1] << " " << f.vertex_indices[2]
        << " " << (j < scalar.size() ? scalar[j] : 0) << "\n";
  }
}

inline void stats_to_csv(const std::vector<GenerationStats>& stats, std::ostream& out) {
  out << "generation,best_fitness,best_so_far_length,mean_coverage,feasible_count\n";
  for (const auto& s : stats)
    out << s.generation << "," << s.best_fitness << "," << s.best_so_far_length << ","
        << s.mean_coverage << "," << s.feasible_count << "\n";
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace ipp
