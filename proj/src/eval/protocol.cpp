#include "mmdd/eval/protocol.hpp"

#include "mmdd/error.hpp"

namespace mmdd {

void EvalProtocol::validate() const {
  require(learning_rate > 0.0, ErrorCode::invalid_argument, "eval learning_rate must be positive");
  require(epochs >= 1, ErrorCode::invalid_argument, "eval epochs must be positive");
  double previous = 0.0;
  for (double m : milestones) {
    require(m > previous && m < 1.0, ErrorCode::invalid_argument,
            "eval milestones must be strictly increasing in (0, 1)");
    previous = m;
  }
  require(decay > 0.0 && decay <= 1.0, ErrorCode::invalid_argument, "eval decay must be in (0, 1]");
  require(batch_size >= 1, ErrorCode::invalid_argument, "eval batch_size must be positive");
  require(momentum >= 0.0 && momentum < 1.0, ErrorCode::invalid_argument, "eval momentum must be in [0, 1)");
  require(weight_decay >= 0.0, ErrorCode::invalid_argument, "eval weight_decay must be nonnegative");
  require(augment_noise >= 0.0, ErrorCode::invalid_argument, "eval augment_noise must be nonnegative");
  require(repeats >= 1, ErrorCode::invalid_argument, "eval repeats must be positive");
  require(test_model == "mlp2" || test_model == "conv3", ErrorCode::invalid_argument,
          "unknown test model '" + test_model + "'");
  require(hidden_width >= 1, ErrorCode::invalid_argument, "eval hidden_width must be positive");
}

}  // namespace mmdd
