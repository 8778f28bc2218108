#pragma once

#include <Eigen/Dense>
#include <vector>

namespace mmdd {

// Batches are row-per-sample: an N x d matrix holds N embeddings of dimension d.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Labels = std::vector<int>;

}  // namespace mmdd
