#pragma once

#include <span>
#include <vector>

#include "mmdd/diffusion/denoiser.hpp"
#include "mmdd/diffusion/schedule.hpp"
#include "mmdd/minimax/config.hpp"
#include "mmdd/minimax/memory_bank.hpp"

namespace mmdd {

struct TrainingBatch {
  Matrix z0;             // clean embeddings, N x d
  std::vector<int> t;    // per-row step in [1, T]
  Matrix eps;            // per-row noise draw
  Labels labels;
};

struct TermWeights {
  double simple = 1.0;
  double repr = 0.0;
  double div = 0.0;

  static TermWeights from(const MinimaxConfig& cfg) { return {1.0, cfg.lambda_r, cfg.lambda_d}; }
};

struct ObjectiveValue {
  double simple = 0.0;
  double repr = 0.0;
  double div = 0.0;
  double total = 0.0;
  Matrix z_hat;  // predicted clean embeddings of this batch
  int empty_repr = 0;
  int empty_div = 0;
};

// Evaluates the fine-tuning objective on one batch and, if `grad` is nonempty,
// accumulates its parameter gradient. Disabled terms (mode off) are reported
// as 0. Bank contents are constants: gradients flow through z_hat only.
ObjectiveValue evaluate_objective(const Denoiser& model, const TrainingBatch& batch,
                                  const NoiseSchedule& schedule, const MemoryBank& real_bank,
                                  const MemoryBank& pred_bank, const MinimaxConfig& cfg,
                                  const TermWeights& weights, std::span<double> grad);

}  // namespace mmdd
