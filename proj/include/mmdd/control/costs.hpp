#pragma once

#include <vector>

#include "mmdd/control/mixture.hpp"
#include "mmdd/control/sde.hpp"
#include "mmdd/types.hpp"

namespace mmdd {

struct CostToGo {
  double estimate = 0.0;        // mean of 1/2 int |u|^2 ds - log f(Z_1)
  double standard_error = 0.0;
  double control_energy = 0.0;  // mean running cost
  double terminal_cost = 0.0;   // mean of -log f(Z_1)
  long clipped = 0;             // terminals where f underflowed
};

CostToGo cost_to_go_estimate(const TrajectoryBundle& bundle, const GaussianMixture& mixture);

// Lower-interpolated empirical quantile of cosine similarities between z and
// each sample row: sorted value at index floor(q (n - 1)).
double quantile_similarity(const Vector& z, const Matrix& samples, double q_tilde);

// Trapezoid rule over a path ((steps+1) x d rows) on the given time grid.
double repr_path_cost(const Matrix& path, const std::vector<double>& times, const Matrix& samples,
                      double q_tilde);

// Max cosine similarity over unordered pairs of terminal rows.
double diversity_terminal_cost(const Matrix& terminals);
double diversity_terminal_cost(const TrajectoryBundle& bundle);

double scalarized_objective(const Matrix& particles, const Matrix& anchors, const Matrix& samples,
                            double lambda_r, double lambda_d, double q_tilde);

// Exact 1D Wasserstein-1 distance between two equally sized empirical samples.
double wasserstein1_1d(std::vector<double> a, std::vector<double> b);

}  // namespace mmdd
