#include "mmdd/minimax/optimizer.hpp"

#include <cmath>

#include "mmdd/error.hpp"

namespace mmdd {

AdamW::AdamW(std::size_t parameter_count, const Options& options)
    : options_(options), m_(parameter_count, 0.0), v_(parameter_count, 0.0) {}

void AdamW::step(std::span<double> params, std::span<const double> grad) {
  require(params.size() == m_.size() && grad.size() == m_.size(), ErrorCode::invalid_argument,
          "optimizer buffer size mismatch");
  ++step_;
  const double b1 = options_.beta1;
  const double b2 = options_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  const double lr = options_.learning_rate;
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = b1 * m_[i] + (1.0 - b1) * grad[i];
    v_[i] = b2 * v_[i] + (1.0 - b2) * grad[i] * grad[i];
    params[i] -= lr * options_.weight_decay * params[i];
    params[i] -= lr * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + options_.epsilon);
  }
}

}  // namespace mmdd
