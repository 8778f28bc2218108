#include "mmdd/minimax/config.hpp"

#include "mmdd/error.hpp"

namespace mmdd {

std::string to_string(ReprMode m) {
  switch (m) {
    case ReprMode::off: return "off";
    case ReprMode::naive: return "naive";
    case ReprMode::minimax: return "minimax";
  }
  return "off";
}

std::string to_string(DivMode m) { return m == DivMode::off ? "off" : "minimax"; }

std::string to_string(BankPartition p) { return p == BankPartition::per_class ? "per_class" : "global"; }

ReprMode repr_mode_from_string(const std::string& s) {
  if (s == "off") return ReprMode::off;
  if (s == "naive") return ReprMode::naive;
  if (s == "minimax") return ReprMode::minimax;
  fail(ErrorCode::invalid_argument, "unknown representativeness mode '" + s + "'");
}

DivMode div_mode_from_string(const std::string& s) {
  if (s == "off") return DivMode::off;
  if (s == "minimax") return DivMode::minimax;
  fail(ErrorCode::invalid_argument, "unknown diversity mode '" + s + "'");
}

BankPartition bank_partition_from_string(const std::string& s) {
  if (s == "per_class") return BankPartition::per_class;
  if (s == "global") return BankPartition::global;
  fail(ErrorCode::invalid_argument, "unknown bank partition '" + s + "'");
}

void MinimaxConfig::validate() const {
  require(lambda_r >= 0.0, ErrorCode::invalid_argument, "lambda_r must be nonnegative");
  require(lambda_d >= 0.0, ErrorCode::invalid_argument, "lambda_d must be nonnegative");
  require(batch_size > 0, ErrorCode::invalid_argument, "batch_size must be positive");
  require(epochs >= 0, ErrorCode::invalid_argument, "epochs must be nonnegative");
  require(learning_rate > 0.0, ErrorCode::invalid_argument, "learning_rate must be positive");
  require(weight_decay >= 0.0, ErrorCode::invalid_argument, "weight_decay must be nonnegative");
  require(memory_capacity > 0, ErrorCode::invalid_argument, "memory_capacity must be positive");
}

}  // namespace mmdd
