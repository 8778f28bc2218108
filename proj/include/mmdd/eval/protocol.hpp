#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mmdd/types.hpp"

namespace mmdd {

struct ImageShape {
  int channels = 3;
  int height = 0;
  int width = 0;

  int flat_size() const { return channels * height * width; }
};

// Items are rows; images are flattened channel-major (c, y, x).
struct LabeledData {
  Matrix x;
  Labels y;
  int num_classes = 0;
  std::optional<ImageShape> image_shape;

  Eigen::Index size() const { return x.rows(); }
};

// Surrogate training recipe: SGD with momentum, step decay by `decay` at each
// milestone fraction of the total iteration count.
struct EvalProtocol {
  double learning_rate = 0.01;
  int epochs = 300;
  std::vector<double> milestones{2.0 / 3.0, 5.0 / 6.0};
  double decay = 0.1;
  int batch_size = 64;
  double momentum = 0.9;
  double weight_decay = 5e-4;
  bool augment_flip = false;    // horizontal flips, images only
  double augment_noise = 0.0;   // Gaussian jitter std, vector data
  int repeats = 3;
  std::string test_model = "mlp2";  // mlp2 | conv3
  int hidden_width = 64;

  void validate() const;
};

}  // namespace mmdd
