#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ipp/path.hpp"
#include "ipp/rng.hpp"

namespace ipp {

struct GAConfig {
  std::size_t population_size = 125;
  std::size_t generations = 500;
  double ier = 0.75;                  // individual evolution rate
  double ger = 0.1;                   // gene evolution rate
  std::size_t tournament_size = 25;
  double rule_init_proportion = 0.5;
  double coverage_goal = 0.95;
  double alpha = 1e6;                 // infeasibility penalty scale
  uint64_t seed = 0;
  std::size_t initial_path_points = 0;  // 0: derived from the scene bounds

  void validate() const {
    if (population_size < 1) throw std::invalid_argument("population_size must be >= 1");
    if (ier < 0 || ier > 1 || ger < 0 || ger > 1)
      throw std::invalid_argument("ier and ger must be in [0, 1]");
    if (rule_init_proportion < 0 || rule_init_proportion > 1)
      throw std::invalid_argument("rule_init_proportion must be in [0, 1]");
    if (tournament_size < 1 || tournament_size > population_size)
      throw std::invalid_argument("tournament_size must be in [1, population_size]");
    if (coverage_goal <= 0 || coverage_goal > 1)
      throw std::invalid_argument("coverage_goal must be in (0, 1]");
    if (alpha <= 0) throw std::invalid_argument("alpha must be > 0");
  }
};

struct EvaluatedIndividual {
  InspectionPath path;
  double coverage = 0.0;
  double length = 0.0;
  double fitness = 0.0;
  bool feasible = false;
};

struct GenerationStats {
  std::size_t generation = 0;
  double best_fitness = 0.0;
  double best_so_far_length = 0.0;  // among feasible individuals; inf if none yet
  double mean_coverage = 0.0;
  std::size_t feasible_count = 0;
};

// Always negative: -alpha/coverage while the constraint is unmet, -length once
// it is. Boundary coverage == goal falls in the feasible branch.
inline double fitness(double coverage, double length, double goal, double alpha) {
  constexpr double kZeroCoverage = 1e-9;
  if (coverage < goal) return -alpha / std::max(coverage, kZeroCoverage);
  return -length;
}

inline const EvaluatedIndividual& tournament_select(const std::vector<EvaluatedIndividual>& pop,
                                                    std::size_t k, Rng& rng) {
  if (k < 1 || k > pop.size()) throw std::invalid_argument("bad tournament size");
  // Partial Fisher-Yates draw of k distinct indices.
  std::vector<uint32_t> idx(pop.size());
  std::iota(idx.begin(), idx.end(), 0u);
  std::size_t best = pop.size();
  for (std::size_t d = 0; d < k; ++d) {
    const std::size_t pick = d + uniform_index(rng, idx.size() - d);
    std::swap(idx[d], idx[pick]);
    const std::size_t cand = idx[d];
    if (best == pop.size()) {
      best = cand;
      continue;
    }
    const auto& a = pop[cand];
    const auto& b = pop[best];
    if (a.fitness > b.fitness ||
        (a.fitness == b.fitness &&
         (a.length < b.length || (a.length == b.length && cand < best))))
      best = cand;
  }
  return pop[best];
}

// Neighbor-pair crossover: walk path a from its start; at every index pair
// (i, j) where a[i] and b[j] are neighbors, switch to the other path with
// probability ger and continue there.
inline InspectionPath crossover(const InspectionPath& a, const InspectionPath& b, double ger,
                                const ViewpointGraph& g, Rng& rng) {
  const InspectionPath* cur = &a;
  const InspectionPath* other = &b;
  InspectionPath child;
  std::size_t i = 0;
  std::size_t other_from = 0;  // switch targets only ever move forward
  while (i < cur->size()) {
    child.vertex_indices.push_back((*cur)[i]);
    bool switched = false;
    for (std::size_t j = other_from; j < other->size(); ++j) {
      if (g.are_neighbors((*cur)[i], (*other)[j]) && coin(rng, ger)) {
        other_from = i + 1;
        std::swap(cur, other);
        i = j;
        switched = true;
        break;
      }
    }
    if (!switched) ++i;
  }
  if (child.size() < 2) child.vertex_indices.push_back(child.vertex_indices.front());
  return child;
}

namespace detail {

// N(u) ∩ N(v) in the path sense: neighbor sets include the vertices themselves.
inline std::vector<uint32_t> neighbor_intersection(const ViewpointGraph& g, uint32_t u,
                                                   uint32_t v) {
  std::vector<uint32_t> nu;
  nu.push_back(u);
  nu.insert(nu.end(), g.adjacency[u].begin(), g.adjacency[u].end());
  std::vector<uint32_t> out;
  for (uint32_t c : nu)
    if (g.are_neighbors(c, v)) out.push_back(c);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

inline InspectionPath mutate_change(const InspectionPath& p, double ger, const ViewpointGraph& g,
                                    Rng& rng) {
  InspectionPath out = p;
  for (std::size_t i = 1; i + 1 < out.size(); ++i) {
    if (!coin(rng, ger)) continue;
    const auto cands =
        detail::neighbor_intersection(g, out[i - 1], out.vertex_indices[i + 1]);
    if (cands.empty()) continue;
    out.vertex_indices[i] = cands[uniform_index(rng, cands.size())];
  }
  return out;
}

inline InspectionPath mutate_add(const InspectionPath& p, double ger, const ViewpointGraph& g,
                                 Rng& rng) {
  InspectionPath out;
  out.vertex_indices.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    out.vertex_indices.push_back(p[i]);
    if (i + 1 >= p.size()) break;
    if (!coin(rng, ger)) continue;
    const auto cands = detail::neighbor_intersection(g, p[i], p[i + 1]);
    if (cands.empty()) continue;
    out.vertex_indices.push_back(cands[uniform_index(rng, cands.size())]);
  }
  return out;
}

inline InspectionPath mutate_delete(const InspectionPath& p, double ger, const ViewpointGraph& g,
                                    Rng& rng) {
  InspectionPath out;
  out.vertex_indices.push_back(p[0]);
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    if (coin(rng, ger) && g.are_neighbors(out.vertex_indices.back(), p[i + 1])) continue;
    out.vertex_indices.push_back(p[i]);
  }
  out.vertex_indices.push_back(p[p.size() - 1]);
  return out;
}

struct EvolveResult {
  EvaluatedIndividual best;       // best-so-far feasible, or best-coverage if none
  bool feasible = false;
  std::vector<GenerationStats> stats;
};

inline EvolveResult evolve(const GAConfig& cfg, const ViewpointGraph& g,
                           const VisibilityMatrix& vm, const TriMesh& mesh,
                           const std::optional<SpanTemplate>& tmpl,
                           const std::vector<bool>* face_mask = nullptr) {
  cfg.validate();
  if (cfg.rule_init_proportion > 0 && !tmpl)
    throw std::invalid_argument("rule_init_proportion > 0 requires a span template");

  std::size_t n_points = cfg.initial_path_points;
  if (n_points == 0) {
    // perimeter of the scene bounding box at mid-height, in grid steps
    const Aabb box = mesh.bounds();
    const Vec3 s = box.size();
    n_points = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::ceil(2.0 * (s.x + s.y) / g.interval)));
  }

  auto evaluate = [&](InspectionPath path) {
    EvaluatedIndividual ind;
    ind.coverage = path_coverage(path, vm, mesh, face_mask);
    ind.length = path_length(path, g);
    ind.fitness = fitness(ind.coverage, ind.length, cfg.coverage_goal, cfg.alpha);
    ind.feasible = ind.coverage >= cfg.coverage_goal;
    ind.path = std::move(path);
    return ind;
  };

  const std::size_t n_rule =
      static_cast<std::size_t>(cfg.rule_init_proportion * cfg.population_size);
  std::vector<EvaluatedIndividual> pop;
  pop.reserve(cfg.population_size);
  for (std::size_t i = 0; i < cfg.population_size; ++i) {
    Rng rng = substream(cfg.seed, /*generation=*/~0ULL, i);
    InspectionPath p = (i < n_rule) ? rule_based_init(g, *tmpl, rng)
                                    : random_init(g, n_points, rng);
    pop.push_back(evaluate(std::move(p)));
  }

  std::optional<EvaluatedIndividual> best_feasible;
  EvaluatedIndividual best_coverage = pop.front();
  auto track = [&](const EvaluatedIndividual& ind) {
    if (ind.coverage > best_coverage.coverage) best_coverage = ind;
    if (ind.feasible && (!best_feasible || ind.length < best_feasible->length))
      best_feasible = ind;
  };
  for (const auto& ind : pop) track(ind);

  std::vector<GenerationStats> stats;
  stats.reserve(cfg.generations);

  for (std::size_t gen = 0; gen < cfg.generations; ++gen) {
    std::vector<EvaluatedIndividual> next;
    next.reserve(cfg.population_size);
    for (std::size_t c = 0; c < cfg.population_size; ++c) {
      Rng rng = substream(cfg.seed, gen, c);
      InspectionPath child;
      if (coin(rng, cfg.ier)) {
        const auto& pa = tournament_select(pop, cfg.tournament_size, rng);
        const auto& pb = tournament_select(pop, cfg.tournament_size, rng);
        child = crossover(pa.path, pb.path, cfg.ger, g, rng);
      } else {
        child = tournament_select(pop, cfg.tournament_size, rng).path;
      }
      if (coin(rng, cfg.ier)) child = mutate_change(child, cfg.ger, g, rng);
      if (coin(rng, cfg.ier)) child = mutate_add(child, cfg.ger, g, rng);
      if (coin(rng, cfg.ier)) child = mutate_delete(child, cfg.ger, g, rng);
      next.push_back(evaluate(std::move(child)));
    }
    pop = std::move(next);  // generational replacement, no elitism

    GenerationStats st;
    st.generation = gen;
    st.best_fitness = -std::numeric_limits<double>::infinity();
    double cov_sum = 0.0;
    for (const auto& ind : pop) {
      track(ind);
      st.best_fitness = std::max(st.best_fitness, ind.fitness);
      cov_sum += ind.coverage;
      if (ind.feasible) ++st.feasible_count;
    }
    st.mean_coverage = cov_sum / static_cast<double>(pop.size());
    st.best_so_far_length =
        best_feasible ? best_feasible->length : std::numeric_limits<double>::infinity();
    stats.push_back(st);
  }

  EvolveResult res;
  res.feasible = best_feasible.has_value();
  res.best = best_feasible ? *best_feasible : best_coverage;
  res.stats = std::move(stats);
  return res;
}

}  // namespace ipp
