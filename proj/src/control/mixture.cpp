#include "mmdd/control/mixture.hpp"

#include <cmath>

#include "mmdd/error.hpp"

namespace mmdd {

GaussianMixture GaussianMixture::make(std::vector<double> weights, std::vector<Vector> means) {
  GaussianMixture m;
  m.weights = Eigen::Map<const Vector>(weights.data(), static_cast<Eigen::Index>(weights.size()));
  m.means = std::move(means);
  m.validate();
  return m;
}

GaussianMixture GaussianMixture::standard_normal(int dimension) {
  return make({1.0}, {Vector::Zero(dimension)});
}

void GaussianMixture::validate() const {
  require(!means.empty() && weights.size() == static_cast<Eigen::Index>(means.size()),
          ErrorCode::invalid_argument, "mixture needs one weight per component");
  require((weights.array() > 0.0).all(), ErrorCode::invalid_argument, "mixture weights must be positive");
  require(std::abs(weights.sum() - 1.0) <= 1e-12, ErrorCode::invalid_argument, "mixture weights must sum to 1");
  for (const auto& m : means) {
    require(m.size() == means.front().size() && m.size() > 0, ErrorCode::invalid_argument,
            "mixture means must share a positive dimension");
    require(m.allFinite(), ErrorCode::invalid_argument, "mixture means must be finite");
  }
}

double GaussianMixture::log_density_ratio(const Vector& z) const {
  require(z.size() == dimension(), ErrorCode::invalid_argument, "state dimension does not match mixture");
  Vector logits(components());
  for (int k = 0; k < components(); ++k) {
    logits(k) = std::log(weights(k)) + means[k].dot(z) - 0.5 * means[k].squaredNorm();
  }
  const double mx = logits.maxCoeff();
  return mx + std::log((logits.array() - mx).exp().sum());
}

Matrix GaussianMixture::sample(int n, Rng& rng) const {
  Matrix out(n, dimension());
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform();
    int k = 0;
    while (k + 1 < components() && u >= weights(k)) {
      u -= weights(k);
      ++k;
    }
    for (int j = 0; j < dimension(); ++j) out(i, j) = means[k](j) + rng.gaussian();
  }
  return out;
}

Vector follmer_drift(const Vector& z, double t, const GaussianMixture& mixture) {
  require(t < 1.0, ErrorCode::invalid_argument, "Follmer drift is defined for t < 1");
  require(z.size() == mixture.dimension(), ErrorCode::invalid_argument, "state dimension does not match mixture");
  const int k = mixture.components();
  Vector logits(k);
  for (int c = 0; c < k; ++c) {
    logits(c) = mixture.means[c].dot(z) - 0.5 * t * mixture.means[c].squaredNorm() + std::log(mixture.weights(c));
  }
  const double mx = logits.maxCoeff();
  const Vector w = (logits.array() - mx).exp().matrix();
  Vector drift = Vector::Zero(z.size());
  for (int c = 0; c < k; ++c) drift += w(c) * mixture.means[c];
  return drift / w.sum();
}

}  // namespace mmdd
