#include "mmdd/experiment/projection.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "mmdd/error.hpp"
#include "mmdd/random.hpp"

namespace mmdd {

Matrix Projection2D::apply(const Matrix& x) const {
  if (identity) return x;
  require(x.cols() == basis.rows(), ErrorCode::plotting, "projection dimension mismatch");
  return (x.rowwise() - mean.transpose()) * basis;
}

Projection2D fit_pca_2d(const Matrix& reference) {
  require(reference.cols() >= 2, ErrorCode::plotting, "scatter plots need at least 2 feature dimensions");
  require(reference.rows() >= 1 && reference.allFinite(), ErrorCode::plotting, "projection needs finite rows");
  Projection2D p;
  p.mean = reference.colwise().mean().transpose();
  const Matrix centred = reference.rowwise() - p.mean.transpose();
  const Matrix cov = centred.transpose() * centred / std::max<double>(1.0, reference.rows() - 1.0);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
  const Eigen::Index d = reference.cols();
  p.eigenvalues = eig.eigenvalues().reverse();
  if (d == 2) return p;
  p.identity = false;
  p.basis.resize(d, 2);
  for (int k = 0; k < 2; ++k) {
    Vector v = eig.eigenvectors().col(d - 1 - k);
    Eigen::Index big = 0;
    v.cwiseAbs().maxCoeff(&big);
    if (v(big) < 0) v = -v;
    p.basis.col(k) = v;
  }
  return p;
}

Matrix tsne_2d(const Matrix& x, double perplexity, int iterations, std::uint64_t seed) {
  const Eigen::Index n = x.rows();
  require(n >= 2, ErrorCode::plotting, "t-SNE needs at least 2 points");
  require(perplexity > 0.0 && perplexity < n, ErrorCode::plotting, "t-SNE perplexity must be in (0, n)");

  Matrix d2(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) d2(i, j) = (x.row(i) - x.row(j)).squaredNorm();

  // Conditional affinities by bisection on the Gaussian precision.
  Matrix p = Matrix::Zero(n, n);
  const double target = std::log(perplexity);
  for (Eigen::Index i = 0; i < n; ++i) {
    double beta = 1.0, lo = 0.0, hi = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 64; ++it) {
      double sum = 0.0, weighted = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        const double v = std::exp(-beta * d2(i, j));
        p(i, j) = v;
        sum += v;
        weighted += v * d2(i, j);
      }
      sum = std::max(sum, 1e-300);
      const double entropy = std::log(sum) + beta * weighted / sum;
      p.row(i) /= sum;
      if (std::abs(entropy - target) < 1e-6) break;
      if (entropy > target) {
        lo = beta;
        beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
      } else {
        hi = beta;
        beta = 0.5 * (beta + lo);
      }
    }
  }
  Matrix pj = (p + p.transpose()) / (2.0 * n);
  pj = pj.cwiseMax(1e-12);

  Rng rng(seed);
  Matrix y = 1e-4 * rng.gaussian_matrix(n, 2);
  Matrix velocity = Matrix::Zero(n, 2);
  Matrix gains = Matrix::Ones(n, 2);
  const double eta = 200.0;
  const int exaggeration_end = std::min(250, iterations / 4);
  Matrix num(n, n), grad(n, 2);
  for (int it = 0; it < iterations; ++it) {
    const double exaggeration = it < exaggeration_end ? 12.0 : 1.0;
    const double momentum = it < exaggeration_end ? 0.5 : 0.8;
    double z = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      num(i, i) = 0.0;
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double v = 1.0 / (1.0 + (y.row(i) - y.row(j)).squaredNorm());
        num(i, j) = num(j, i) = v;
        z += 2.0 * v;
      }
    }
    grad.setZero();
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i == j) continue;
        const double mult = (exaggeration * pj(i, j) - num(i, j) / z) * num(i, j);
        grad.row(i) += 4.0 * mult * (y.row(i) - y.row(j));
      }
    for (Eigen::Index i = 0; i < n; ++i)
      for (int k = 0; k < 2; ++k) {
        const bool same = (grad(i, k) > 0) == (velocity(i, k) > 0);
        gains(i, k) = std::max(0.01, same ? gains(i, k) * 0.8 : gains(i, k) + 0.2);
        velocity(i, k) = momentum * velocity(i, k) - eta * gains(i, k) * grad(i, k);
        y(i, k) += velocity(i, k);
      }
    y.rowwise() -= y.colwise().mean();
  }
  return y;
}

}  // namespace mmdd
