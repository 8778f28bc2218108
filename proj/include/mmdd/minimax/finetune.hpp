#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "mmdd/diffusion/denoiser.hpp"
#include "mmdd/minimax/config.hpp"
#include "mmdd/minimax/memory_bank.hpp"

namespace mmdd {

struct LossRecord {
  long step = 0;
  double simple = 0.0;
  double repr = 0.0;
  double div = 0.0;
  double total = 0.0;
};

struct FinetuneResult {
  Denoiser model;
  std::vector<LossRecord> trace;
  MemoryBank real_bank;  // M
  MemoryBank pred_bank;  // D
  long empty_repr_terms = 0;
  long empty_div_terms = 0;
  long skipped_steps = 0;  // steps whose loss was non-finite
};

inline constexpr int kMaxNonFiniteSteps = 10;

// Minimax fine-tuning. `embeddings` are already encoded (N x d, one row per item).
// Per step: mini-batch, uniform t and Gaussian eps per row, forward noising,
// objective and one AdamW step, then enqueue the real z0 into M and z_hat into D.
// Each epoch visits the data once in a seeded shuffled order.
FinetuneResult finetune(Denoiser model, const Matrix& embeddings, const Labels& labels,
                        const NoiseSchedule& schedule, const MinimaxConfig& cfg, std::uint64_t seed);

// CSV with header step,simple,repr,div,total.
void write_loss_trace_csv(const std::filesystem::path& path, const std::vector<LossRecord>& trace);

}  // namespace mmdd
