#pragma once

#include <vector>

#include <json.hpp>

#include "mmdd/types.hpp"

namespace mmdd {

// Tiny lexicographic instance: the inner level (|p| - r)^2 is minimized by the
// whole radius-r sphere; the middle level maximizes the summed quantile
// similarity to the samples; the top level minimizes the max pairwise
// similarity between particles.
struct TrilevelInstance {
  Matrix samples;               // rows in R^1 or R^2
  int n_particles = 2;
  double q_tilde = 0.0;
  double radius = 1.0;
  int angular_resolution = 360; // 2D: points per turn
  int radial_resolution = 81;   // grid points per radial (or 1D) axis
  double radius_tolerance = 1e-9;
  double level_tolerance = 1e-12; // slack when selecting middle-level maximizers

  void validate() const;
};

struct TrilevelSolution {
  Matrix positions;             // n_particles x d
  std::vector<int> grid_indices;
  double inner_value = 0.0;     // sum_i (|p_i| - r)^2
  double inner_global_min = 0.0;
  double middle_value = 0.0;    // sum_i Q(p_i)
  double top_value = 0.0;       // max pairwise similarity
  long grid_points = 0;
  long inner_feasible = 0;
  long middle_feasible = 0;

  nlohmann::json to_json() const;
};

// Dense grid used by the solver: polar in 2D (radii linspace(0, 2r) times
// angles k 2pi / angular_resolution), linspace(-2r, 2r) in 1D.
Matrix trilevel_grid(const TrilevelInstance& instance);

TrilevelSolution solve_trilevel_toy(const TrilevelInstance& instance);

}  // namespace mmdd
