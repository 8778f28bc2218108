#pragma once

#include <vector>

#include "mmdd/minimax/config.hpp"
#include "mmdd/minimax/memory_bank.hpp"
#include "mmdd/types.hpp"

namespace mmdd {

// Result of a bank-based criterion. `selected[i]` is the index (FIFO order,
// oldest = 0) of the extremal bank entry for row i, or -1 when the queue for
// that row's label was empty; such rows contribute 0 but still count in the mean.
struct BankTerm {
  double value = 0.0;
  std::vector<int> selected;
  std::vector<double> extremes;
  int empty_count = 0;
  Matrix grad;  // d value / d z_hat, N x d (only when requested)
};

// -mean_i cos(z_hat_i, mean(real_batch)).
double repr_loss_naive(const Matrix& z_hat, const Matrix& real_batch, Matrix* grad = nullptr);

// -mean_i min_m cos(z_hat_i, bank_m) over same-class entries of the real bank.
BankTerm repr_loss(const Matrix& z_hat, const MemoryBank& bank, const Labels& labels,
                   bool with_grad = false);

// +mean_i max_d cos(z_hat_i, bank_d) over same-class entries of the predicted bank.
BankTerm div_loss(const Matrix& z_hat, const MemoryBank& bank, const Labels& labels,
                  bool with_grad = false);

// simple + lambda_r * repr + lambda_d * div. Non-finite inputs are numeric errors.
double total_loss(double simple, double repr_term, double div_term, const MinimaxConfig& cfg);

}  // namespace mmdd
