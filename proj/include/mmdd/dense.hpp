#pragma once

#include <span>
#include <vector>

#include "mmdd/random.hpp"
#include "mmdd/types.hpp"

namespace mmdd {

enum class Activation { silu, relu, tanh };

// Fully connected stack with an activation after every hidden layer and a linear
// output. Parameters live in a caller-owned flat buffer (per layer: W column-major
// out x in, then b), which keeps optimizers and finite-difference checks simple.
//
// Internally samples are columns: forward takes in x N, returns out x N.
class DenseStack {
 public:
  struct Cache {
    std::vector<Matrix> inputs;       // input to each layer
    std::vector<Matrix> preactivations;  // hidden layers only
  };

  DenseStack() = default;
  DenseStack(std::vector<int> widths, Activation activation);

  std::size_t parameter_count() const { return parameter_count_; }
  int input_width() const { return widths_.front(); }
  int output_width() const { return widths_.back(); }
  const std::vector<int>& widths() const { return widths_; }
  Activation activation() const { return activation_; }

  // Uniform fan-in scaled init; biases zero.
  void initialize(std::span<double> params, Rng& rng) const;

  Matrix forward(std::span<const double> params, const Matrix& x, Cache* cache) const;

  // Accumulates parameter gradients into `grad`, returns dL/dx.
  Matrix backward(std::span<const double> params, const Cache& cache, const Matrix& dy,
                  std::span<double> grad) const;

 private:
  std::vector<int> widths_;
  Activation activation_ = Activation::silu;
  std::vector<std::size_t> offsets_;
  std::size_t parameter_count_ = 0;
};

}  // namespace mmdd
