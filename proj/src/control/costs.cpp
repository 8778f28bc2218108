#include "mmdd/control/costs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mmdd/error.hpp"
#include "mmdd/minimax/similarity.hpp"

namespace mmdd {

CostToGo cost_to_go_estimate(const TrajectoryBundle& bundle, const GaussianMixture& mixture) {
  mixture.validate();
  require(bundle.n_particles >= 1 && bundle.terminal.rows() == bundle.n_particles &&
              bundle.control_energy.size() == bundle.n_particles,
          ErrorCode::invalid_argument, "bundle has no recorded drift energy");
  require(bundle.dimension == mixture.dimension(), ErrorCode::invalid_argument,
          "bundle dimension does not match mixture");
  const double log_floor = std::log(std::numeric_limits<double>::min());
  CostToGo out;
  std::vector<double> per_path(bundle.n_particles);
  for (int i = 0; i < bundle.n_particles; ++i) {
    double log_f = mixture.log_density_ratio(bundle.terminal.row(i).transpose());
    if (!(log_f >= log_floor)) {
      log_f = log_floor;
      ++out.clipped;
    }
    per_path[i] = bundle.control_energy(i) - log_f;
    out.control_energy += bundle.control_energy(i);
    out.terminal_cost -= log_f;
  }
  const double n = bundle.n_particles;
  out.control_energy /= n;
  out.terminal_cost /= n;
  double mean = 0.0;
  for (double v : per_path) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : per_path) var += (v - mean) * (v - mean);
  out.estimate = mean;
  out.standard_error = n > 1 ? std::sqrt(var / (n - 1) / n) : 0.0;
  return out;
}

double quantile_similarity(const Vector& z, const Matrix& samples, double q_tilde) {
  require(samples.rows() > 0, ErrorCode::empty_input, "quantile similarity needs samples");
  require(q_tilde >= 0.0 && q_tilde <= 1.0, ErrorCode::invalid_argument, "quantile must lie in [0, 1]");
  require(samples.cols() == z.size(), ErrorCode::invalid_argument, "sample dimension mismatch");
  std::vector<double> sims(samples.rows());
  for (Eigen::Index i = 0; i < samples.rows(); ++i) sims[i] = cosine_sim(z, samples.row(i).transpose());
  const auto idx = static_cast<std::size_t>(std::floor(q_tilde * static_cast<double>(sims.size() - 1)));
  std::nth_element(sims.begin(), sims.begin() + static_cast<std::ptrdiff_t>(idx), sims.end());
  return sims[idx];
}

double repr_path_cost(const Matrix& path, const std::vector<double>& times, const Matrix& samples,
                      double q_tilde) {
  require(path.rows() >= 1 && static_cast<std::size_t>(path.rows()) == times.size(), ErrorCode::invalid_argument,
          "path and time grid must align");
  double total = 0.0;
  double prev = quantile_similarity(path.row(0).transpose(), samples, q_tilde);
  for (Eigen::Index k = 1; k < path.rows(); ++k) {
    require(times[k] > times[k - 1], ErrorCode::invalid_argument, "time grid must be strictly increasing");
    const double cur = quantile_similarity(path.row(k).transpose(), samples, q_tilde);
    total += 0.5 * (prev + cur) * (times[k] - times[k - 1]);
    prev = cur;
  }
  return total;
}

double diversity_terminal_cost(const Matrix& terminals) {
  require(terminals.rows() >= 2, ErrorCode::invalid_argument, "diversity needs at least two particles");
  double best = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < terminals.rows(); ++i)
    for (Eigen::Index j = i + 1; j < terminals.rows(); ++j)
      best = std::max(best, cosine_sim(terminals.row(i).transpose(), terminals.row(j).transpose()));
  return best;
}

double diversity_terminal_cost(const TrajectoryBundle& bundle) { return diversity_terminal_cost(bundle.terminal); }

double scalarized_objective(const Matrix& particles, const Matrix& anchors, const Matrix& samples,
                            double lambda_r, double lambda_d, double q_tilde) {
  require(particles.rows() == anchors.rows() && particles.cols() == anchors.cols(), ErrorCode::invalid_argument,
          "particles and anchors must align by index");
  double total = particles.rows() >= 2 ? lambda_d * diversity_terminal_cost(particles) : 0.0;
  for (Eigen::Index i = 0; i < particles.rows(); ++i) {
    const Vector p = particles.row(i).transpose();
    if (lambda_r != 0.0) total -= lambda_r * quantile_similarity(p, samples, q_tilde);
    total += (particles.row(i) - anchors.row(i)).squaredNorm();
  }
  return total;
}

double wasserstein1_1d(std::vector<double> a, std::vector<double> b) {
  require(!a.empty() && a.size() == b.size(), ErrorCode::invalid_argument,
          "Wasserstein-1 needs equally sized nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) total += std::abs(a[i] - b[i]);
  return total / static_cast<double>(a.size());
}

}  // namespace mmdd
