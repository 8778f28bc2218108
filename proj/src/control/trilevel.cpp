#include "mmdd/control/trilevel.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "mmdd/control/costs.hpp"
#include "mmdd/error.hpp"
#include "mmdd/minimax/similarity.hpp"

namespace mmdd {

namespace {

constexpr double kMaxCombinations = 2e7;

double combinations(long n, int k) {
  double c = 1.0;
  for (int i = 0; i < k; ++i) c = c * static_cast<double>(n - i) / (i + 1);
  return c;
}

}  // namespace

void TrilevelInstance::validate() const {
  require(samples.rows() > 0, ErrorCode::empty_input, "tri-level instance needs samples");
  require(samples.cols() == 1 || samples.cols() == 2, ErrorCode::invalid_argument,
          "tri-level toy supports dimension 1 or 2");
  require(n_particles >= 2, ErrorCode::invalid_argument, "tri-level instance needs at least two particles");
  require(q_tilde >= 0.0 && q_tilde <= 1.0, ErrorCode::invalid_argument, "quantile must lie in [0, 1]");
  require(radius > 0.0 && std::isfinite(radius), ErrorCode::invalid_argument, "radius must be positive");
  require(level_tolerance >= 0.0 && radius_tolerance >= 0.0, ErrorCode::invalid_argument,
          "tolerances must be nonnegative");
  require(radial_resolution >= 50, ErrorCode::resolution, "grid needs at least 50 points per axis");
  require(samples.cols() == 1 || angular_resolution >= 50, ErrorCode::resolution,
          "grid needs at least 50 points per axis");
}

Matrix trilevel_grid(const TrilevelInstance& inst) {
  const int m = inst.radial_resolution;
  if (inst.samples.cols() == 1) {
    Matrix g(m, 1);
    for (int j = 0; j < m; ++j) g(j, 0) = -2.0 * inst.radius + 4.0 * inst.radius * j / (m - 1);
    return g;
  }
  const int a = inst.angular_resolution;
  Matrix g(static_cast<Eigen::Index>(m) * a, 2);
  for (int j = 0; j < m; ++j) {
    const double r = 2.0 * inst.radius * j / (m - 1);
    for (int k = 0; k < a; ++k) {
      const double th = 2.0 * std::numbers::pi * k / a;
      g(static_cast<Eigen::Index>(j) * a + k, 0) = r * std::cos(th);
      g(static_cast<Eigen::Index>(j) * a + k, 1) = r * std::sin(th);
    }
  }
  return g;
}

TrilevelSolution solve_trilevel_toy(const TrilevelInstance& inst) {
  inst.validate();
  const Matrix grid = trilevel_grid(inst);
  const Eigen::Index n = grid.rows();

  // Inner level: per-particle (|p| - r)^2 is separable, so the joint minimizer
  // set is the product of per-particle minimizer sets.
  Vector inner(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double e = grid.row(i).norm() - inst.radius;
    inner(i) = e * e;
  }
  const double inner_min = inner.minCoeff();
  require(std::sqrt(inner_min) <= inst.radius_tolerance, ErrorCode::resolution,
          "grid does not represent the radius-r sphere within tolerance");
  std::vector<Eigen::Index> feasible;
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::sqrt(inner(i)) <= inst.radius_tolerance) feasible.push_back(i);

  // Middle level: summed quantile similarity, again separable.
  std::vector<double> q(feasible.size());
  double q_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < feasible.size(); ++i) {
    q[i] = quantile_similarity(grid.row(feasible[i]).transpose(), inst.samples, inst.q_tilde);
    q_max = std::max(q_max, q[i]);
  }
  std::vector<Eigen::Index> arc;
  for (std::size_t i = 0; i < feasible.size(); ++i)
    if (q[i] >= q_max - inst.level_tolerance) arc.push_back(feasible[i]);

  // Top level: exhaustive search over particle assignments from the arc.
  // Distinct points when enough exist, otherwise repetition is allowed.
  const int k = inst.n_particles;
  const long m = static_cast<long>(arc.size());
  const bool distinct = m >= k;
  require(combinations(distinct ? m : m + k - 1, k) <= kMaxCombinations, ErrorCode::resolution,
          "middle-level maximizer set too large for exhaustive top-level search");
  const int d = static_cast<int>(grid.cols());
  Matrix sim(m, m);
  for (long i = 0; i < m; ++i)
    for (long j = i; j < m; ++j)
      sim(i, j) = sim(j, i) = cosine_sim(grid.row(arc[i]).transpose(), grid.row(arc[j]).transpose());

  std::vector<long> idx(k), best_idx;
  for (int i = 0; i < k; ++i) idx[i] = distinct ? i : 0;
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    double worst = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < k && worst < best; ++a)
      for (int b = a + 1; b < k; ++b) worst = std::max(worst, sim(idx[a], idx[b]));
    if (worst < best) {
      best = worst;
      best_idx = idx;
    }
    int p = k - 1;
    if (distinct) {
      while (p >= 0 && idx[p] == m - k + p) --p;
      if (p < 0) break;
      ++idx[p];
      for (int r = p + 1; r < k; ++r) idx[r] = idx[r - 1] + 1;
    } else {
      while (p >= 0 && idx[p] == m - 1) --p;
      if (p < 0) break;
      ++idx[p];
      for (int r = p + 1; r < k; ++r) idx[r] = idx[p];
    }
  }

  TrilevelSolution sol;
  sol.positions.resize(k, d);
  for (int i = 0; i < k; ++i) {
    const Eigen::Index g = arc[best_idx[i]];
    sol.grid_indices.push_back(static_cast<int>(g));
    sol.positions.row(i) = grid.row(g);
    const double e = grid.row(g).norm() - inst.radius;
    sol.inner_value += e * e;
    sol.middle_value += quantile_similarity(grid.row(g).transpose(), inst.samples, inst.q_tilde);
  }
  sol.top_value = best;
  sol.inner_global_min = 0.0;
  sol.grid_points = static_cast<long>(n);
  sol.inner_feasible = static_cast<long>(feasible.size());
  sol.middle_feasible = m;
  return sol;
}

nlohmann::json TrilevelSolution::to_json() const {
  nlohmann::json pos = nlohmann::json::array();
  for (Eigen::Index i = 0; i < positions.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < positions.cols(); ++j) row.push_back(positions(i, j));
    pos.push_back(row);
  }
  return {{"positions", pos},
          {"grid_indices", grid_indices},
          {"inner_value", inner_value},
          {"inner_global_min", inner_global_min},
          {"middle_value", middle_value},
          {"top_value", top_value},
          {"grid_points", grid_points},
          {"inner_feasible", inner_feasible},
          {"middle_feasible", middle_feasible}};
}

}  // namespace mmdd
