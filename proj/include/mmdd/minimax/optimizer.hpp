#pragma once

#include <span>
#include <vector>

namespace mmdd {

// Adam with decoupled weight decay.
class AdamW {
 public:
  struct Options {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double weight_decay = 0.0;
  };

  AdamW(std::size_t parameter_count, const Options& options);

  void step(std::span<double> params, std::span<const double> grad);
  long steps_taken() const { return step_; }

 private:
  Options options_;
  std::vector<double> m_;
  std::vector<double> v_;
  long step_ = 0;
};

}  // namespace mmdd
