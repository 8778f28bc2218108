#pragma once

#include "mmdd/types.hpp"

namespace mmdd {

inline constexpr double kNormFloor = 1e-8;

// dot(a, b) / (max(|a|, 1e-8) * max(|b|, 1e-8))
double cosine_sim(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b);

// Gradient of cosine_sim(a, b) with respect to a.
Vector cosine_sim_grad(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b);

}  // namespace mmdd
