#include "mmdd/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "mmdd/error.hpp"

namespace mmdd {

namespace {

Matrix squared_distances(const Matrix& a, const Matrix& b) {
  const Vector na = a.rowwise().squaredNorm();
  const Vector nb = b.rowwise().squaredNorm();
  Matrix d = (-2.0 * a * b.transpose()).eval();
  d.colwise() += na;
  d.rowwise() += nb.transpose();
  return d.cwiseMax(0.0);
}

// Exact pairwise distances; the expanded form above loses precision for
// nearly coincident points, which matters for strict ball membership.
Matrix distances(const Matrix& a, const Matrix& b) {
  Matrix d(a.rows(), b.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.rows(); ++j) d(i, j) = (a.row(i) - b.row(j)).norm();
  return d;
}

double median(std::vector<double>& v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + mid);
  return 0.5 * (lower + upper);
}

}  // namespace

double median_heuristic_bandwidth(const Matrix& a, const Matrix& b) {
  Matrix pooled(a.rows() + b.rows(), a.cols());
  pooled << a, b;
  const auto n = pooled.rows();
  if (n < 2) return 1.0;
  std::vector<double> d;
  d.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) d.push_back((pooled.row(i) - pooled.row(j)).norm());
  const double m = median(d);
  return m > 0.0 ? m : 1.0;
}

double mmd_rbf(const Matrix& a, const Matrix& b, std::optional<double> bandwidth) {
  require(a.rows() > 0 && b.rows() > 0, ErrorCode::empty_input, "MMD needs two nonempty sets");
  require(a.cols() == b.cols(), ErrorCode::invalid_argument, "MMD feature dimension mismatch");
  const double h = bandwidth ? *bandwidth : median_heuristic_bandwidth(a, b);
  require(h > 0.0 && std::isfinite(h), ErrorCode::invalid_argument, "MMD bandwidth must be positive");
  const double gamma = 1.0 / (2.0 * h * h);
  auto kernel_mean = [&](const Matrix& x, const Matrix& y) {
    return (-gamma * squared_distances(x, y)).array().exp().mean();
  };
  const double value = kernel_mean(a, a) + kernel_mean(b, b) - 2.0 * kernel_mean(a, b);
  return std::max(value, 0.0);
}

Vector knn_radii(const Matrix& points, int k) {
  const auto n = points.rows();
  require(k >= 1 && n > k, ErrorCode::insufficient_data,
          "k-NN radius needs more than k = " + std::to_string(k) + " points");
  const Matrix d = distances(points, points);
  Vector radii(n);
  std::vector<double> row(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) row[j] = d(i, j);
    // Index k of the sorted row, whose index 0 is the point itself.
    std::nth_element(row.begin(), row.begin() + k, row.end());
    radii(i) = row[k];
  }
  return radii;
}

PrdcResult prdc(const Matrix& real, const Matrix& gen, int k) {
  require(real.cols() == gen.cols(), ErrorCode::invalid_argument, "PRDC feature dimension mismatch");
  require(real.rows() > k && gen.rows() > k, ErrorCode::insufficient_data,
          "PRDC needs more than k = " + std::to_string(k) + " points in each set");
  const Vector real_r = knn_radii(real, k);
  const Vector gen_r = knn_radii(gen, k);
  const Matrix d = distances(real, gen);  // real x gen
  const auto n = real.rows();
  const auto m = gen.rows();

  long precise = 0;
  long density_hits = 0;
  for (Eigen::Index j = 0; j < m; ++j) {
    long hits = 0;
    for (Eigen::Index i = 0; i < n; ++i) hits += d(i, j) < real_r(i) ? 1 : 0;
    precise += hits > 0 ? 1 : 0;
    density_hits += hits;
  }
  long recalled = 0;
  long covered = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    bool in_gen_ball = false;
    for (Eigen::Index j = 0; j < m && !in_gen_ball; ++j) in_gen_ball = d(i, j) < gen_r(j);
    recalled += in_gen_ball ? 1 : 0;
    covered += d.row(i).minCoeff() < real_r(i) ? 1 : 0;
  }
  PrdcResult r;
  r.precision = 100.0 * static_cast<double>(precise) / static_cast<double>(m);
  r.recall = 100.0 * static_cast<double>(recalled) / static_cast<double>(n);
  r.density = static_cast<double>(density_hits) / (static_cast<double>(k) * static_cast<double>(m));
  r.coverage = 100.0 * static_cast<double>(covered) / static_cast<double>(n);
  return r;
}

Matrix sample_covariance(const Matrix& x) {
  const auto n = x.rows();
  const Matrix centered = x.rowwise() - x.colwise().mean();
  if (n < 2) return Matrix::Zero(x.cols(), x.cols());
  return centered.transpose() * centered / static_cast<double>(n - 1);
}

double frechet_distance(const Vector& mu1, const Matrix& cov1, const Vector& mu2, const Matrix& cov2) {
  require(mu1.size() == mu2.size() && cov1.rows() == mu1.size() && cov2.rows() == mu2.size(),
          ErrorCode::invalid_argument, "Frechet distance moment dimension mismatch");
  require(cov1.allFinite() && cov2.allFinite() && mu1.allFinite() && mu2.allFinite(), ErrorCode::numeric,
          "non-finite feature moments");
  // tr (S1 S2)^{1/2} = tr (S1^{1/2} S2 S1^{1/2})^{1/2}, all symmetric PSD.
  Eigen::SelfAdjointEigenSolver<Matrix> e1(cov1);
  require(e1.info() == Eigen::Success, ErrorCode::numeric, "covariance eigendecomposition failed");
  const Vector root_vals = e1.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Matrix root1 = e1.eigenvectors() * root_vals.asDiagonal() * e1.eigenvectors().transpose();
  Matrix inner = root1 * cov2 * root1;
  inner = 0.5 * (inner + inner.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> e2(inner, Eigen::EigenvaluesOnly);
  require(e2.info() == Eigen::Success, ErrorCode::numeric, "covariance product eigendecomposition failed");
  const double tr_root = e2.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  const double value = (mu1 - mu2).squaredNorm() + cov1.trace() + cov2.trace() - 2.0 * tr_root;
  require(std::isfinite(value), ErrorCode::numeric, "non-finite Frechet distance");
  return std::max(value, 0.0);
}

double gaussian_fid(const Matrix& real, const Matrix& gen) {
  require(real.rows() > 0 && gen.rows() > 0, ErrorCode::empty_input, "FID needs two nonempty sets");
  require(real.cols() == gen.cols(), ErrorCode::invalid_argument, "FID feature dimension mismatch");
  const Vector mu_r = real.colwise().mean().transpose();
  const Vector mu_g = gen.colwise().mean().transpose();
  Matrix cov_r = sample_covariance(real);
  Matrix cov_g = sample_covariance(gen);
  const auto d = real.cols();
  if (real.rows() < d + 1 || gen.rows() < d + 1) {
    cov_r = Matrix(cov_r.diagonal().asDiagonal());
    cov_g = Matrix(cov_g.diagonal().asDiagonal());
  }
  return frechet_distance(mu_r, cov_r, mu_g, cov_g);
}

}  // namespace mmdd
