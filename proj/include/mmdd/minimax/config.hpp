#pragma once

#include <string>

#include "mmdd/diffusion/noising.hpp"

namespace mmdd {

enum class ReprMode { off, naive, minimax };
enum class DivMode { off, minimax };
enum class BankPartition { per_class, global };

std::string to_string(ReprMode m);
std::string to_string(DivMode m);
std::string to_string(BankPartition p);
ReprMode repr_mode_from_string(const std::string& s);
DivMode div_mode_from_string(const std::string& s);
BankPartition bank_partition_from_string(const std::string& s);

struct MinimaxConfig {
  double lambda_r = 0.002;
  double lambda_d = 0.008;
  int batch_size = 8;
  int epochs = 8;
  double learning_rate = 1e-3;
  double weight_decay = 0.0;
  int memory_capacity = 64;
  ReprMode repr = ReprMode::minimax;
  DivMode div = DivMode::minimax;
  BankPartition partition = BankPartition::per_class;
  CleanEstimate clean_estimate = CleanEstimate::paper_literal;

  // Throws invalid_argument naming the offending field. epochs may be zero
  // (a no-op fine-tune); everything else numeric must be positive except the
  // lambdas and weight decay, which may be zero.
  void validate() const;
};

}  // namespace mmdd
