#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "mmdd/eval/protocol.hpp"
#include "mmdd/random.hpp"

namespace mmdd {

// A classifier whose parameters live in a flat buffer. forward() keeps the
// activations needed by the following backward() call.
class TrainableNet {
 public:
  virtual ~TrainableNet() = default;
  virtual std::size_t parameter_count() const = 0;
  virtual void initialize(std::span<double> params, Rng& rng) const = 0;
  virtual Matrix forward(std::span<const double> params, const Matrix& x) = 0;   // N x classes
  virtual void backward(std::span<const double> params, const Matrix& d_logits, std::span<double> grad) = 0;
  virtual Matrix features(std::span<const double> params, const Matrix& x) = 0;  // penultimate layer
};

// Two-layer perceptron for vector data.
std::unique_ptr<TrainableNet> make_mlp2(int input_dim, int hidden, int num_classes);
// Three conv blocks (3x3 conv, ReLU, 2x2 average pooling on the first two),
// global average pooling and a linear head.
std::unique_ptr<TrainableNet> make_conv3(const ImageShape& shape, int num_classes);

std::unique_ptr<TrainableNet> make_test_model(const std::string& name, const LabeledData& like, int hidden);

struct TrainedClassifier {
  std::unique_ptr<TrainableNet> net;
  std::vector<double> params;

  Labels predict(const Matrix& x) const;
  Matrix features(const Matrix& x) const;
};

TrainedClassifier train_classifier(const LabeledData& train, const EvalProtocol& protocol, std::uint64_t seed);

double top1_accuracy(const TrainedClassifier& model, const LabeledData& test);

struct AccuracySummary {
  double mean = 0.0;  // percent
  double std = 0.0;   // population standard deviation over seeds, percent
  std::vector<double> per_seed;
};

// Trains a fresh classifier on the surrogate per seed, reports top-1 on the test set.
AccuracySummary train_eval_classifier(const LabeledData& surrogate, const LabeledData& test,
                                      const EvalProtocol& protocol, const std::vector<std::uint64_t>& seeds);

// Maps items to metric features: identity, or the penultimate layer of a conv3
// trained on the full training set.
class FeatureExtractor {
 public:
  static FeatureExtractor identity();
  static FeatureExtractor convnet(const LabeledData& train, const EvalProtocol& protocol, std::uint64_t seed);

  bool is_identity() const { return !model_; }
  Matrix extract(const Matrix& x) const;

 private:
  std::shared_ptr<TrainedClassifier> model_;
};

}  // namespace mmdd
