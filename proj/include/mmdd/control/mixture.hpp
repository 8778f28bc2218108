#pragma once

#include <vector>

#include "mmdd/random.hpp"
#include "mmdd/types.hpp"

namespace mmdd {

// Identity-covariance Gaussian mixture sum_k w_k N(m_k, I). Its density ratio
// against the standard normal is f(z) = sum_k w_k exp(m_k . z - |m_k|^2 / 2).
struct GaussianMixture {
  Vector weights;
  std::vector<Vector> means;

  static GaussianMixture make(std::vector<double> weights, std::vector<Vector> means);
  static GaussianMixture standard_normal(int dimension);

  int dimension() const { return means.empty() ? 0 : static_cast<int>(means.front().size()); }
  int components() const { return static_cast<int>(means.size()); }

  // Weights positive and summing to 1 within 1e-12; equal mean dimensions.
  void validate() const;

  double log_density_ratio(const Vector& z) const;  // log f(z)
  Matrix sample(int n, Rng& rng) const;
};

// Closed-form Follmer drift grad log Q_{1-t} f (z): the softmax-weighted mean
// of m_k with logits m_k . z - t |m_k|^2 / 2 + log w_k. Requires t < 1.
Vector follmer_drift(const Vector& z, double t, const GaussianMixture& mixture);

}  // namespace mmdd
