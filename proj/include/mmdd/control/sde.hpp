#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "mmdd/types.hpp"

namespace mmdd {

using DriftFn = std::function<Vector(const Vector& z, double t)>;

struct SimulationOptions {
  bool suppress_noise = false;  // test hook: deterministic dynamics
  bool record_paths = true;     // store every state and drift evaluation
};

// Particle ensemble on the uniform grid t_k = k / steps over [0, 1].
// When paths are recorded, states hold N x (steps+1) x d values and drifts
// N x steps x d values (particle-major, then time, then coordinate).
struct TrajectoryBundle {
  int n_particles = 0;
  int steps = 0;
  int dimension = 0;
  std::uint64_t seed = 0;
  std::vector<double> times;
  bool paths_recorded = false;
  std::vector<double> states;
  std::vector<double> drifts;
  Matrix terminal;        // N x d, Z_1 per particle
  Vector control_energy;  // 1/2 sum_k |u(Z_k, t_k)|^2 dt per particle

  Vector state(int particle, int step) const;
  Vector drift(int particle, int step) const;
  Matrix path(int particle) const;  // (steps+1) x d

  void save(const std::filesystem::path& path) const;
  static TrajectoryBundle load(const std::filesystem::path& path);
};

// Euler-Maruyama: Z_{k+1} = Z_k + u(Z_k, t_k) dt + sqrt(dt) xi. Particle i
// draws from its own stream derived from (seed, i), so results do not depend
// on how particles are scheduled.
TrajectoryBundle simulate_sde(const DriftFn& drift, const Vector& z0, int steps, int n_particles,
                              std::uint64_t seed, const SimulationOptions& options = {});

}  // namespace mmdd
