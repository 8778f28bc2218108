#pragma once

#include <optional>

#include "mmdd/types.hpp"

namespace mmdd {

// Median of pairwise Euclidean distances over the pooled rows of a and b
// (falls back to 1 when every distance is zero).
double median_heuristic_bandwidth(const Matrix& a, const Matrix& b);

// Biased (V-statistic) estimate of squared MMD with a Gaussian kernel
// k(x, y) = exp(-|x - y|^2 / (2 h^2)). No bandwidth means the median heuristic.
double mmd_rbf(const Matrix& a, const Matrix& b, std::optional<double> bandwidth = std::nullopt);

// k-nearest-neighbour manifold metrics. precision, recall and coverage are
// percentages; density is the raw ratio (may exceed 1).
struct PrdcResult {
  double precision = 0.0;
  double recall = 0.0;
  double density = 0.0;
  double coverage = 0.0;
};

inline constexpr int kDefaultPrdcNeighbours = 5;

PrdcResult prdc(const Matrix& real, const Matrix& gen, int k = kDefaultPrdcNeighbours);

// Distance from each row to its k-th nearest other row.
Vector knn_radii(const Matrix& points, int k);

// |mu_r - mu_g|^2 + tr(S_r + S_g - 2 (S_r S_g)^{1/2}) on feature moments.
// Sets with fewer than d + 1 rows use diagonal covariances.
double gaussian_fid(const Matrix& real, const Matrix& gen);
double frechet_distance(const Vector& mu1, const Matrix& cov1, const Vector& mu2, const Matrix& cov2);

// Unbiased sample covariance (n - 1 denominator; zero for a single row).
Matrix sample_covariance(const Matrix& x);

}  // namespace mmdd
