#include "mmdd/minimax/losses.hpp"

#include <cmath>

#include "mmdd/error.hpp"
#include "mmdd/minimax/similarity.hpp"

namespace mmdd {

namespace {

enum class Extremum { min, max };

BankTerm bank_criterion(const Matrix& z_hat, const MemoryBank& bank, const Labels& labels,
                        bool with_grad, Extremum kind) {
  const auto n = z_hat.rows();
  require(static_cast<Eigen::Index>(labels.size()) == n, ErrorCode::invalid_argument,
          "one label per predicted embedding required");
  require(n == 0 || z_hat.cols() == bank.dimension(), ErrorCode::invalid_argument,
          "predicted embedding dimension does not match the bank");
  BankTerm term;
  term.selected.assign(n, -1);
  term.extremes.assign(n, 0.0);
  if (with_grad) {
    term.grad = Matrix::Zero(n, z_hat.cols());
  }
  if (n == 0) {
    return term;
  }
  const double sign = kind == Extremum::min ? -1.0 : 1.0;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& queue = bank.entries(labels[i]);
    if (queue.empty()) {
      ++term.empty_count;
      continue;
    }
    const Vector zi = z_hat.row(i).transpose();
    int best = 0;
    double best_sim = cosine_sim(zi, queue[0]);
    for (std::size_t m = 1; m < queue.size(); ++m) {
      const double s = cosine_sim(zi, queue[m]);
      // Strict comparison keeps the oldest entry on ties.
      if ((kind == Extremum::min && s < best_sim) || (kind == Extremum::max && s > best_sim)) {
        best = static_cast<int>(m);
        best_sim = s;
      }
    }
    term.selected[i] = best;
    term.extremes[i] = best_sim;
    sum += best_sim;
    if (with_grad) {
      term.grad.row(i) = (sign / static_cast<double>(n)) * cosine_sim_grad(zi, queue[best]).transpose();
    }
  }
  term.value = sign * sum / static_cast<double>(n);
  return term;
}

}  // namespace

double repr_loss_naive(const Matrix& z_hat, const Matrix& real_batch, Matrix* grad) {
  require(real_batch.rows() > 0, ErrorCode::empty_input, "representativeness needs a nonempty real batch");
  require(z_hat.rows() == 0 || z_hat.cols() == real_batch.cols(), ErrorCode::invalid_argument,
          "predicted and real embedding dimension mismatch");
  const auto n = z_hat.rows();
  if (grad) {
    *grad = Matrix::Zero(n, real_batch.cols());
  }
  if (n == 0) {
    return 0.0;
  }
  const Vector center = real_batch.colwise().mean().transpose();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector zi = z_hat.row(i).transpose();
    sum += cosine_sim(zi, center);
    if (grad) {
      grad->row(i) = (-1.0 / static_cast<double>(n)) * cosine_sim_grad(zi, center).transpose();
    }
  }
  return -sum / static_cast<double>(n);
}

BankTerm repr_loss(const Matrix& z_hat, const MemoryBank& bank, const Labels& labels, bool with_grad) {
  return bank_criterion(z_hat, bank, labels, with_grad, Extremum::min);
}

BankTerm div_loss(const Matrix& z_hat, const MemoryBank& bank, const Labels& labels, bool with_grad) {
  return bank_criterion(z_hat, bank, labels, with_grad, Extremum::max);
}

double total_loss(double simple, double repr_term, double div_term, const MinimaxConfig& cfg) {
  require(std::isfinite(simple) && std::isfinite(repr_term) && std::isfinite(div_term),
          ErrorCode::numeric, "non-finite loss term");
  return simple + cfg.lambda_r * repr_term + cfg.lambda_d * div_term;
}

}  // namespace mmdd
