#include "mmdd/minimax/objective.hpp"

#include "mmdd/diffusion/noising.hpp"
#include "mmdd/error.hpp"
#include "mmdd/minimax/losses.hpp"
#include "mmdd/minimax/similarity.hpp"

namespace mmdd {

namespace {

// Naive representativeness, grouped like the banks: each row is compared with
// the mean of the real rows sharing its queue.
double naive_term(const Matrix& z_hat, const Matrix& z0, const Labels& labels, BankPartition partition,
                  Matrix* grad, int* empty) {
  const auto n = z_hat.rows();
  if (grad) *grad = Matrix::Zero(n, z_hat.cols());
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    Vector center = Vector::Zero(z0.cols());
    int members = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (partition == BankPartition::global || labels[j] == labels[i]) {
        center += z0.row(j).transpose();
        ++members;
      }
    }
    if (members == 0) {
      ++*empty;
      continue;
    }
    center /= members;
    const Vector zi = z_hat.row(i).transpose();
    sum += cosine_sim(zi, center);
    if (grad) grad->row(i) = (-1.0 / static_cast<double>(n)) * cosine_sim_grad(zi, center).transpose();
  }
  return n == 0 ? 0.0 : -sum / static_cast<double>(n);
}

}  // namespace

ObjectiveValue evaluate_objective(const Denoiser& model, const TrainingBatch& batch,
                                  const NoiseSchedule& schedule, const MemoryBank& real_bank,
                                  const MemoryBank& pred_bank, const MinimaxConfig& cfg,
                                  const TermWeights& weights, std::span<double> grad) {
  const auto n = batch.z0.rows();
  require(n > 0, ErrorCode::empty_input, "objective needs a nonempty batch");
  const bool want_grad = !grad.empty();

  const Matrix zt = forward_noise(batch.z0, batch.t, batch.eps, schedule);
  Denoiser::Pass pass;
  const Matrix eps_pred = model.forward(zt, batch.t, batch.labels, want_grad ? &pass : nullptr);

  ObjectiveValue out;
  out.z_hat.resize(n, zt.cols());
  std::vector<double> slope(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.z_hat.row(i) = predict_clean_embedding(zt.row(i).transpose(), eps_pred.row(i).transpose(),
                                               cfg.clean_estimate, batch.t[i], schedule)
                           .transpose();
    slope[i] = clean_estimate_slope(cfg.clean_estimate, batch.t[i], schedule);
  }

  out.simple = simple_loss(eps_pred, batch.eps);
  Matrix d_zhat = Matrix::Zero(n, zt.cols());

  switch (cfg.repr) {
    case ReprMode::off:
      break;
    case ReprMode::naive: {
      Matrix g;
      out.repr = naive_term(out.z_hat, batch.z0, batch.labels, cfg.partition, want_grad ? &g : nullptr,
                            &out.empty_repr);
      if (want_grad) d_zhat += weights.repr * g;
      break;
    }
    case ReprMode::minimax: {
      BankTerm term = repr_loss(out.z_hat, real_bank, batch.labels, want_grad);
      out.repr = term.value;
      out.empty_repr = term.empty_count;
      if (want_grad) d_zhat += weights.repr * term.grad;
      break;
    }
  }
  if (cfg.div == DivMode::minimax) {
    BankTerm term = div_loss(out.z_hat, pred_bank, batch.labels, want_grad);
    out.div = term.value;
    out.empty_div = term.empty_count;
    if (want_grad) d_zhat += weights.div * term.grad;
  }
  out.total = weights.simple * out.simple + weights.repr * out.repr + weights.div * out.div;

  if (want_grad) {
    Matrix d_eps = (2.0 * weights.simple / static_cast<double>(n)) * (eps_pred - batch.eps);
    for (Eigen::Index i = 0; i < n; ++i) {
      d_eps.row(i) += slope[i] * d_zhat.row(i);
    }
    model.backward(pass, d_eps, batch.labels, grad);
  }
  return out;
}

}  // namespace mmdd
