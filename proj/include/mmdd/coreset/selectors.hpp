#pragma once

#include <cstdint>
#include <vector>

#include "mmdd/coreset/feature_set.hpp"

namespace mmdd {

// All selectors work per class on members ordered by source id and throw
// insufficient_data if a class has fewer than ipc members. Ties go to the
// lowest source id.

// Uniform sample without replacement of ipc ids per class.
Selection random_select(const FeatureSet& fs, int ipc, std::uint64_t seed);

// Greedy herding on mean-centred features: step k adds the unselected point
// that brings the running selection mean closest to the class mean.
Selection herding_select(const FeatureSet& fs, int ipc);

// Greedy farthest-point traversal (Euclidean) from a seeded uniform start.
Selection kcenter_select(const FeatureSet& fs, int ipc, std::uint64_t seed);

// Single-class k-center from a given start row; returns row positions in
// selection order. Exposed for oracle tests.
std::vector<Eigen::Index> kcenter_greedy(const Matrix& points, const std::vector<long>& ids, int count,
                                         Eigen::Index start);

// Largest distance from any point to its nearest selected point.
double covering_radius(const Matrix& points, const std::vector<Eigen::Index>& selected);

}  // namespace mmdd
