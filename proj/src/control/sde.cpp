#include "mmdd/control/sde.hpp"

#include <cmath>

#include "mmdd/archive.hpp"
#include "mmdd/error.hpp"
#include "mmdd/random.hpp"

namespace mmdd {

Vector TrajectoryBundle::state(int particle, int step) const {
  require(paths_recorded, ErrorCode::invalid_argument, "bundle was simulated without recorded paths");
  const std::size_t base = (static_cast<std::size_t>(particle) * (steps + 1) + step) * dimension;
  return Eigen::Map<const Vector>(states.data() + base, dimension);
}

Vector TrajectoryBundle::drift(int particle, int step) const {
  require(paths_recorded, ErrorCode::invalid_argument, "bundle was simulated without recorded paths");
  const std::size_t base = (static_cast<std::size_t>(particle) * steps + step) * dimension;
  return Eigen::Map<const Vector>(drifts.data() + base, dimension);
}

Matrix TrajectoryBundle::path(int particle) const {
  Matrix p(steps + 1, dimension);
  for (int k = 0; k <= steps; ++k) p.row(k) = state(particle, k).transpose();
  return p;
}

void TrajectoryBundle::save(const std::filesystem::path& path) const {
  ArrayArchive archive;
  archive.meta = {{"n_particles", n_particles}, {"steps", steps}, {"dimension", dimension},
                  {"seed", seed}, {"paths_recorded", paths_recorded}};
  archive.put("times", {steps + 1}, times);
  std::vector<double> term(static_cast<std::size_t>(n_particles) * dimension);
  for (int i = 0; i < n_particles; ++i)
    for (int j = 0; j < dimension; ++j) term[static_cast<std::size_t>(i) * dimension + j] = terminal(i, j);
  archive.put("terminal", {n_particles, dimension}, std::move(term));
  archive.put("control_energy", {n_particles},
              std::vector<double>(control_energy.data(), control_energy.data() + control_energy.size()));
  if (paths_recorded) {
    archive.put("states", {n_particles, steps + 1, dimension}, states);
    archive.put("drifts", {n_particles, steps, dimension}, drifts);
  }
  write_archive(path, archive);
}

TrajectoryBundle TrajectoryBundle::load(const std::filesystem::path& path) {
  ArrayArchive archive = read_archive(path);
  TrajectoryBundle b;
  b.n_particles = archive.meta.at("n_particles").get<int>();
  b.steps = archive.meta.at("steps").get<int>();
  b.dimension = archive.meta.at("dimension").get<int>();
  b.seed = archive.meta.at("seed").get<std::uint64_t>();
  b.paths_recorded = archive.meta.at("paths_recorded").get<bool>();
  b.times = archive.get("times").data;
  const auto& term = archive.get("terminal").data;
  b.terminal.resize(b.n_particles, b.dimension);
  for (int i = 0; i < b.n_particles; ++i)
    for (int j = 0; j < b.dimension; ++j) b.terminal(i, j) = term[static_cast<std::size_t>(i) * b.dimension + j];
  const auto& energy = archive.get("control_energy").data;
  b.control_energy = Eigen::Map<const Vector>(energy.data(), static_cast<Eigen::Index>(energy.size()));
  if (b.paths_recorded) {
    b.states = archive.get("states").data;
    b.drifts = archive.get("drifts").data;
  }
  return b;
}

TrajectoryBundle simulate_sde(const DriftFn& drift, const Vector& z0, int steps, int n_particles,
                              std::uint64_t seed, const SimulationOptions& options) {
  require(steps >= 1, ErrorCode::invalid_argument, "simulation needs at least one step");
  require(n_particles >= 1, ErrorCode::invalid_argument, "simulation needs at least one particle");
  require(z0.size() >= 1 && z0.allFinite(), ErrorCode::invalid_argument, "start state must be finite");
  const int d = static_cast<int>(z0.size());
  const double dt = 1.0 / steps;
  const double sqrt_dt = std::sqrt(dt);

  TrajectoryBundle b;
  b.n_particles = n_particles;
  b.steps = steps;
  b.dimension = d;
  b.seed = seed;
  b.paths_recorded = options.record_paths;
  b.times.resize(steps + 1);
  for (int k = 0; k <= steps; ++k) b.times[k] = static_cast<double>(k) / steps;
  b.times[steps] = 1.0;
  if (options.record_paths) {
    b.states.resize(static_cast<std::size_t>(n_particles) * (steps + 1) * d);
    b.drifts.resize(static_cast<std::size_t>(n_particles) * steps * d);
  }
  b.terminal.resize(n_particles, d);
  b.control_energy = Vector::Zero(n_particles);

  for (int i = 0; i < n_particles; ++i) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(i)}));
    Vector z = z0;
    double energy = 0.0;
    for (int k = 0; k < steps; ++k) {
      if (options.record_paths) {
        std::copy(z.data(), z.data() + d, b.states.begin() + (static_cast<std::ptrdiff_t>(i) * (steps + 1) + k) * d);
      }
      const Vector u = drift(z, b.times[k]);
      require(u.size() == d, ErrorCode::invalid_argument, "drift returned the wrong dimension");
      if (options.record_paths) {
        std::copy(u.data(), u.data() + d, b.drifts.begin() + (static_cast<std::ptrdiff_t>(i) * steps + k) * d);
      }
      energy += 0.5 * u.squaredNorm() * dt;
      z += u * dt;
      if (!options.suppress_noise) {
        for (int j = 0; j < d; ++j) z(j) += sqrt_dt * rng.gaussian();
      }
      require(z.allFinite(), ErrorCode::numeric,
              "non-finite state for particle " + std::to_string(i) + " at step " + std::to_string(k + 1));
    }
    if (options.record_paths) {
      std::copy(z.data(), z.data() + d, b.states.begin() + (static_cast<std::ptrdiff_t>(i) * (steps + 1) + steps) * d);
    }
    b.terminal.row(i) = z.transpose();
    b.control_energy(i) = energy;
  }
  return b;
}

}  // namespace mmdd
