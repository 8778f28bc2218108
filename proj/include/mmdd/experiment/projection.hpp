#pragma once

#include <cstdint>

#include "mmdd/types.hpp"

namespace mmdd {

// Two-component principal projection fitted on reference rows. Identity when
// the data are already 2D.
struct Projection2D {
  bool identity = true;
  Vector mean;
  Matrix basis;        // d x 2, orthonormal columns
  Vector eigenvalues;  // all covariance eigenvalues, descending

  Matrix apply(const Matrix& x) const;
};

// Dimension < 2 is a plotting error.
Projection2D fit_pca_2d(const Matrix& reference);

// Exact t-SNE (O(n^2) per iteration) for small point sets.
Matrix tsne_2d(const Matrix& x, double perplexity, int iterations, std::uint64_t seed);

}  // namespace mmdd
