#include "mmdd/minimax/finetune.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>

#include "mmdd/error.hpp"
#include "mmdd/minimax/losses.hpp"
#include "mmdd/minimax/objective.hpp"
#include "mmdd/minimax/optimizer.hpp"
#include "mmdd/random.hpp"

namespace mmdd {

FinetuneResult finetune(Denoiser model, const Matrix& embeddings, const Labels& labels,
                        const NoiseSchedule& schedule, const MinimaxConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const auto n = embeddings.rows();
  require(n > 0, ErrorCode::empty_input, "fine-tuning dataset is empty");
  require(static_cast<Eigen::Index>(labels.size()) == n, ErrorCode::invalid_argument,
          "one label per embedding required");
  require(embeddings.cols() == model.dimension(), ErrorCode::invalid_argument,
          "embedding dimension does not match the model");
  require(model.config().num_steps == schedule.steps, ErrorCode::invalid_argument,
          "model was configured for a different schedule length");

  const int d = model.dimension();
  const int classes = model.config().num_classes;
  FinetuneResult result{std::move(model), {},
                        MemoryBank(cfg.memory_capacity, classes, d, cfg.partition),
                        MemoryBank(cfg.memory_capacity, classes, d, cfg.partition)};
  Denoiser& net = result.model;

  AdamW optimizer(net.parameter_count(), {.learning_rate = cfg.learning_rate,
                                          .weight_decay = cfg.weight_decay});
  const TermWeights weights = TermWeights::from(cfg);
  Rng rng(seed);
  std::vector<Eigen::Index> order(n);
  std::vector<double> grad(net.parameter_count());
  long step = 0;
  int consecutive_bad = 0;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::shuffle(order.begin(), order.end(), rng.engine());
    for (Eigen::Index start = 0; start < n; start += cfg.batch_size) {
      const Eigen::Index size = std::min<Eigen::Index>(cfg.batch_size, n - start);
      TrainingBatch batch;
      batch.z0.resize(size, d);
      batch.t.resize(size);
      batch.labels.resize(size);
      for (Eigen::Index i = 0; i < size; ++i) {
        batch.z0.row(i) = embeddings.row(order[start + i]);
        batch.labels[i] = labels[order[start + i]];
        batch.t[i] = static_cast<int>(rng.uniform_int(1, schedule.steps));
      }
      batch.eps = rng.gaussian_matrix(size, d);

      std::fill(grad.begin(), grad.end(), 0.0);
      ObjectiveValue value = evaluate_objective(net, batch, schedule, result.real_bank,
                                                result.pred_bank, cfg, weights, grad);
      ++step;
      result.empty_repr_terms += value.empty_repr;
      result.empty_div_terms += value.empty_div;

      const bool finite = std::isfinite(value.simple) && std::isfinite(value.repr) &&
                          std::isfinite(value.div) &&
                          std::all_of(grad.begin(), grad.end(), [](double g) { return std::isfinite(g); });
      if (!finite) {
        ++result.skipped_steps;
        result.trace.push_back({step, value.simple, value.repr, value.div,
                                std::numeric_limits<double>::quiet_NaN()});
        require(++consecutive_bad < kMaxNonFiniteSteps, ErrorCode::numeric,
                "fine-tuning loss non-finite for " + std::to_string(kMaxNonFiniteSteps) +
                    " consecutive steps (last step " + std::to_string(step) + ")");
        continue;
      }
      consecutive_bad = 0;
      const double total = total_loss(value.simple, value.repr, value.div, cfg);
      result.trace.push_back({step, value.simple, value.repr, value.div, total});

      optimizer.step(net.parameters(), grad);
      result.real_bank.enqueue(batch.z0, batch.labels);
      result.pred_bank.enqueue(value.z_hat, batch.labels);
    }
  }
  return result;
}

void write_loss_trace_csv(const std::filesystem::path& path, const std::vector<LossRecord>& trace) {
  std::ofstream out(path, std::ios::trunc);
  require(out.good(), ErrorCode::io, "cannot write loss trace: " + path.string());
  out << "step,simple,repr,div,total\n";
  char line[256];
  for (const auto& r : trace) {
    std::snprintf(line, sizeof(line), "%ld,%.17g,%.17g,%.17g,%.17g\n", r.step, r.simple, r.repr, r.div,
                  r.total);
    out << line;
  }
  require(out.good(), ErrorCode::io, "failed writing loss trace: " + path.string());
}

}  // namespace mmdd
