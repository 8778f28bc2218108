#include "mmdd/minimax/similarity.hpp"

#include <algorithm>

#include "mmdd/error.hpp"

namespace mmdd {

double cosine_sim(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b) {
  require(a.size() == b.size(), ErrorCode::invalid_argument, "cosine similarity dimension mismatch");
  const double na = std::max(a.norm(), kNormFloor);
  const double nb = std::max(b.norm(), kNormFloor);
  return a.dot(b) / (na * nb);
}

Vector cosine_sim_grad(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b) {
  require(a.size() == b.size(), ErrorCode::invalid_argument, "cosine similarity dimension mismatch");
  const double raw_na = a.norm();
  const double na = std::max(raw_na, kNormFloor);
  const double nb = std::max(b.norm(), kNormFloor);
  Vector g = b / (na * nb);
  if (raw_na > kNormFloor) {
    // Norm term only exists where the floor is inactive.
    g -= (a.dot(b) / (na * nb)) * a / (raw_na * raw_na);
  }
  return g;
}

}  // namespace mmdd
