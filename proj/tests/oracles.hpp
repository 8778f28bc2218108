#pragma once

// Brute-force reference computations used to check the library. They share no
// code with the implementations they check beyond the Eigen containers (and,
// for the tri-level search, the cosine primitive).

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "mmdd/control/mixture.hpp"
#include "mmdd/eval/metrics.hpp"
#include "mmdd/minimax/similarity.hpp"
#include "mmdd/types.hpp"

namespace mmdd::oracle {

inline double distance(const Matrix& a, Eigen::Index i, const Matrix& b, Eigen::Index j) {
  double s = 0.0;
  for (Eigen::Index c = 0; c < a.cols(); ++c) s += (a(i, c) - b(j, c)) * (a(i, c) - b(j, c));
  return std::sqrt(s);
}

// Biased squared MMD as an explicit double sum.
inline double mmd(const Matrix& a, const Matrix& b, double h) {
  auto k = [&](const Matrix& x, Eigen::Index i, const Matrix& y, Eigen::Index j) {
    const double d = distance(x, i, y, j);
    return std::exp(-d * d / (2.0 * h * h));
  };
  double aa = 0.0, bb = 0.0, ab = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.rows(); ++j) aa += k(a, i, a, j);
  for (Eigen::Index i = 0; i < b.rows(); ++i)
    for (Eigen::Index j = 0; j < b.rows(); ++j) bb += k(b, i, b, j);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.rows(); ++j) ab += k(a, i, b, j);
  const double na = static_cast<double>(a.rows()), nb = static_cast<double>(b.rows());
  return aa / (na * na) + bb / (nb * nb) - 2.0 * ab / (na * nb);
}

inline std::vector<double> knn_radii(const Matrix& x, int k) {
  std::vector<double> r;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    std::vector<double> d;
    for (Eigen::Index j = 0; j < x.rows(); ++j)
      if (j != i) d.push_back(distance(x, i, x, j));
    std::sort(d.begin(), d.end());
    r.push_back(d[k - 1]);
  }
  return r;
}

inline PrdcResult prdc(const Matrix& real, const Matrix& gen, int k) {
  const auto rr = knn_radii(real, k), gr = knn_radii(gen, k);
  double precise = 0, recalled = 0, covered = 0, hits = 0;
  for (Eigen::Index j = 0; j < gen.rows(); ++j) {
    bool any = false;
    for (Eigen::Index i = 0; i < real.rows(); ++i) {
      const bool in = distance(real, i, gen, j) < rr[i];
      any = any || in;
      hits += in;
    }
    precise += any;
  }
  for (Eigen::Index i = 0; i < real.rows(); ++i) {
    bool r = false, c = false;
    for (Eigen::Index j = 0; j < gen.rows(); ++j) {
      r = r || distance(real, i, gen, j) < gr[j];
      c = c || distance(real, i, gen, j) < rr[i];
    }
    recalled += r;
    covered += c;
  }
  const double n = static_cast<double>(real.rows()), m = static_cast<double>(gen.rows());
  return {100.0 * precise / m, 100.0 * recalled / n, hits / (k * m), 100.0 * covered / n};
}

// Frechet distance with the product square root taken by eigendecomposition
// of S_a^{1/2} S_b S_a^{1/2}.
inline double fid(const Matrix& a, const Matrix& b) {
  auto moments = [](const Matrix& x, Vector& mu, Matrix& cov) {
    mu = x.colwise().mean().transpose();
    cov = Matrix::Zero(x.cols(), x.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const Vector c = x.row(i).transpose() - mu;
      cov += c * c.transpose();
    }
    cov /= static_cast<double>(x.rows() - 1);
  };
  Vector ma, mb;
  Matrix ca, cb;
  moments(a, ma, ca);
  moments(b, mb, cb);
  Eigen::SelfAdjointEigenSolver<Matrix> ea(ca);
  const Matrix root =
      ea.eigenvectors() * ea.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() * ea.eigenvectors().transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> em(root * cb * root);
  return (ma - mb).squaredNorm() + ca.trace() + cb.trace() - 2.0 * em.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
}

// Index of the point closest to the mean (first on ties).
inline Eigen::Index mean_nearest(const Matrix& points) {
  const Eigen::RowVectorXd mean = points.colwise().mean();
  Eigen::Index best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const double d = (points.row(i) - mean).squaredNorm();
    if (d < best_d) best_d = d, best = i;
  }
  return best;
}

// Smallest covering radius over all size-k subsets.
inline double optimal_covering_radius(const Matrix& points, int k) {
  const int n = static_cast<int>(points.rows());
  std::vector<int> mask(n, 0);
  std::fill(mask.end() - k, mask.end(), 1);
  double best = std::numeric_limits<double>::infinity();
  do {
    double radius = 0.0;
    for (int i = 0; i < n; ++i) {
      double nearest = std::numeric_limits<double>::infinity();
      for (int j = 0; j < n; ++j)
        if (mask[j]) nearest = std::min(nearest, distance(points, i, points, j));
      radius = std::max(radius, nearest);
    }
    best = std::min(best, radius);
  } while (std::next_permutation(mask.begin(), mask.end()));
  return best;
}

// Gauss-Hermite rule for expectations under N(0, 1) (Golub-Welsch on the
// probabilists' Hermite recurrence).
struct Quadrature {
  Vector nodes;
  Vector weights;
};

inline Quadrature gauss_hermite(int n) {
  Matrix jacobi = Matrix::Zero(n, n);
  for (int k = 1; k < n; ++k) jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(static_cast<double>(k));
  Eigen::SelfAdjointEigenSolver<Matrix> es(jacobi);
  Quadrature q{es.eigenvalues(), es.eigenvectors().row(0).transpose().cwiseAbs2()};
  q.weights /= q.weights.sum();
  return q;
}

// log E[f(z + sqrt(1 - t) xi)] for a 1D mixture density ratio f, by quadrature.
inline double log_heat_semigroup_1d(double z, double t, const GaussianMixture& mix, const Quadrature& q) {
  const double s = std::sqrt(1.0 - t);
  double total = 0.0;
  for (Eigen::Index i = 0; i < q.nodes.size(); ++i) {
    const double x = z + s * q.nodes[i];
    double f = 0.0;
    for (int k = 0; k < mix.components(); ++k) {
      const double m = mix.means[k][0];
      f += mix.weights[k] * std::exp(m * x - 0.5 * m * m);
    }
    total += q.weights[i] * f;
  }
  return std::log(total);
}

// Central difference of the quadrature log semigroup.
inline double drift_1d(double z, double t, const GaussianMixture& mix, const Quadrature& q, double h = 1e-5) {
  return (log_heat_semigroup_1d(z + h, t, mix, q) - log_heat_semigroup_1d(z - h, t, mix, q)) / (2.0 * h);
}

// Sorted-order statistic with lower interpolation.
inline double quantile_similarity(const Vector& z, const Matrix& samples, double q) {
  std::vector<double> s;
  for (Eigen::Index i = 0; i < samples.rows(); ++i) s.push_back(cosine_sim(z, samples.row(i).transpose()));
  std::sort(s.begin(), s.end());
  return s[static_cast<std::size_t>(std::floor(q * static_cast<double>(s.size() - 1)))];
}

// Exhaustive lexicographic search on a candidate point set: inner-feasible
// points (on the sphere), then per-particle maximizers of the quantile
// similarity within `level_tolerance`, then the combination with the smallest
// maximum pairwise similarity.
struct TrilevelAnswer {
  double top_value = std::numeric_limits<double>::infinity();
  std::vector<Eigen::Index> feasible;
  std::vector<Eigen::Index> middle;
};

inline TrilevelAnswer trilevel(const Matrix& grid, const Matrix& samples, int particles, double q_tilde,
                               double radius, double radius_tolerance, double level_tolerance) {
  TrilevelAnswer out;
  for (Eigen::Index i = 0; i < grid.rows(); ++i)
    if (std::abs(grid.row(i).norm() - radius) <= radius_tolerance) out.feasible.push_back(i);
  std::vector<double> q;
  double q_max = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i : out.feasible) {
    q.push_back(quantile_similarity(grid.row(i).transpose(), samples, q_tilde));
    q_max = std::max(q_max, q.back());
  }
  for (std::size_t k = 0; k < out.feasible.size(); ++k)
    if (q[k] >= q_max - level_tolerance) out.middle.push_back(out.feasible[k]);

  const int n = static_cast<int>(out.middle.size());
  const bool distinct = n >= particles;
  std::vector<int> pick(particles, 0);
  if (distinct)
    for (int p = 0; p < particles; ++p) pick[p] = p;
  while (true) {
    double worst = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < particles; ++a)
      for (int b = a + 1; b < particles; ++b)
        worst = std::max(worst, cosine_sim(grid.row(out.middle[pick[a]]).transpose(),
                                           grid.row(out.middle[pick[b]]).transpose()));
    out.top_value = std::min(out.top_value, worst);
    // Next combination (strictly increasing when distinct, nondecreasing otherwise).
    int p = particles - 1;
    while (p >= 0 && pick[p] == (distinct ? n - particles + p : n - 1)) --p;
    if (p < 0) break;
    ++pick[p];
    for (int r = p + 1; r < particles; ++r) pick[r] = distinct ? pick[r - 1] + 1 : pick[p];
  }
  return out;
}

}  // namespace mmdd::oracle
