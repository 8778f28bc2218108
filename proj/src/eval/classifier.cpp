#include "mmdd/eval/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "mmdd/dense.hpp"
#include "mmdd/error.hpp"

namespace mmdd {

namespace {

class Mlp2 final : public TrainableNet {
 public:
  Mlp2(int input_dim, int hidden, int num_classes)
      : stack_({input_dim, hidden, num_classes}, Activation::relu) {}

  std::size_t parameter_count() const override { return stack_.parameter_count(); }
  void initialize(std::span<double> params, Rng& rng) const override { stack_.initialize(params, rng); }

  Matrix forward(std::span<const double> params, const Matrix& x) override {
    return stack_.forward(params, x.transpose(), &cache_).transpose();
  }

  void backward(std::span<const double> params, const Matrix& d_logits, std::span<double> grad) override {
    stack_.backward(params, cache_, d_logits.transpose(), grad);
  }

  Matrix features(std::span<const double> params, const Matrix& x) override {
    DenseStack::Cache cache;
    stack_.forward(params, x.transpose(), &cache);
    return cache.inputs.back().transpose();
  }

 private:
  DenseStack stack_;
  DenseStack::Cache cache_;
};

constexpr Eigen::Index kPredictChunk = 256;

Matrix chunked(const Matrix& x, const std::function<Matrix(const Matrix&)>& fn) {
  if (x.rows() <= kPredictChunk) return fn(x);
  Matrix first = fn(x.topRows(std::min(kPredictChunk, x.rows())));
  Matrix out(x.rows(), first.cols());
  out.topRows(first.rows()) = first;
  for (Eigen::Index start = kPredictChunk; start < x.rows(); start += kPredictChunk) {
    const Eigen::Index n = std::min(kPredictChunk, x.rows() - start);
    out.middleRows(start, n) = fn(x.middleRows(start, n));
  }
  return out;
}

void flip_horizontal(Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>> row, const ImageShape& s) {
  for (int c = 0; c < s.channels; ++c)
    for (int y = 0; y < s.height; ++y)
      for (int x = 0; x < s.width / 2; ++x) {
        const Eigen::Index a = (static_cast<Eigen::Index>(c) * s.height + y) * s.width + x;
        const Eigen::Index b = (static_cast<Eigen::Index>(c) * s.height + y) * s.width + (s.width - 1 - x);
        std::swap(row(a), row(b));
      }
}

}  // namespace

std::unique_ptr<TrainableNet> make_mlp2(int input_dim, int hidden, int num_classes) {
  return std::make_unique<Mlp2>(input_dim, hidden, num_classes);
}

std::unique_ptr<TrainableNet> make_test_model(const std::string& name, const LabeledData& like, int hidden) {
  if (name == "mlp2") {
    return make_mlp2(static_cast<int>(like.x.cols()), hidden, like.num_classes);
  }
  if (name == "conv3") {
    require(like.image_shape.has_value(), ErrorCode::invalid_argument, "conv3 needs image data");
    return make_conv3(*like.image_shape, like.num_classes);
  }
  fail(ErrorCode::invalid_argument, "unknown test model '" + name + "'");
}

Labels TrainedClassifier::predict(const Matrix& x) const {
  const Matrix logits = chunked(x, [&](const Matrix& part) { return net->forward(params, part); });
  Labels out(logits.rows());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    Eigen::Index arg = 0;
    logits.row(i).maxCoeff(&arg);
    out[i] = static_cast<int>(arg);
  }
  return out;
}

Matrix TrainedClassifier::features(const Matrix& x) const {
  return chunked(x, [&](const Matrix& part) { return net->features(params, part); });
}

TrainedClassifier train_classifier(const LabeledData& train, const EvalProtocol& protocol, std::uint64_t seed) {
  protocol.validate();
  require(train.size() > 0, ErrorCode::empty_input, "classifier training set is empty");
  require(static_cast<Eigen::Index>(train.y.size()) == train.size(), ErrorCode::invalid_argument,
          "one label per training item required");

  TrainedClassifier model;
  model.net = make_test_model(protocol.test_model, train, protocol.hidden_width);
  model.params.assign(model.net->parameter_count(), 0.0);
  Rng rng(seed);
  model.net->initialize(model.params, rng);

  const Eigen::Index n = train.size();
  const int batch = std::min<int>(protocol.batch_size, static_cast<int>(n));
  const long per_epoch = (n + batch - 1) / batch;
  const long total = per_epoch * protocol.epochs;
  std::vector<long> milestones;
  for (double m : protocol.milestones) milestones.push_back(static_cast<long>(std::floor(m * total)));

  std::vector<double> velocity(model.params.size(), 0.0);
  std::vector<double> grad(model.params.size());
  std::vector<Eigen::Index> order(n);
  long iteration = 0;
  for (int epoch = 0; epoch < protocol.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::shuffle(order.begin(), order.end(), rng.engine());
    for (Eigen::Index start = 0; start < n; start += batch, ++iteration) {
      const Eigen::Index size = std::min<Eigen::Index>(batch, n - start);
      Matrix xb(size, train.x.cols());
      Labels yb(size);
      for (Eigen::Index i = 0; i < size; ++i) {
        xb.row(i) = train.x.row(order[start + i]);
        yb[i] = train.y[order[start + i]];
        if (protocol.augment_flip && train.image_shape && rng.uniform() < 0.5) {
          flip_horizontal(xb.row(i), *train.image_shape);
        }
      }
      if (protocol.augment_noise > 0.0) xb += protocol.augment_noise * rng.gaussian_matrix(size, xb.cols());

      Matrix logits = model.net->forward(model.params, xb);
      // Softmax cross-entropy gradient, averaged over the batch.
      for (Eigen::Index i = 0; i < size; ++i) {
        const double mx = logits.row(i).maxCoeff();
        logits.row(i) = (logits.row(i).array() - mx).exp().matrix();
        logits.row(i) /= logits.row(i).sum();
        logits(i, yb[i]) -= 1.0;
      }
      logits /= static_cast<double>(size);
      std::fill(grad.begin(), grad.end(), 0.0);
      model.net->backward(model.params, logits, grad);

      double lr = protocol.learning_rate;
      for (long m : milestones) {
        if (iteration >= m) lr *= protocol.decay;
      }
      for (std::size_t p = 0; p < model.params.size(); ++p) {
        const double g = grad[p] + protocol.weight_decay * model.params[p];
        velocity[p] = protocol.momentum * velocity[p] + g;
        model.params[p] -= lr * velocity[p];
      }
    }
  }
  return model;
}

double top1_accuracy(const TrainedClassifier& model, const LabeledData& test) {
  require(test.size() > 0, ErrorCode::empty_input, "test set is empty");
  const Labels pred = model.predict(test.x);
  long correct = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) correct += pred[i] == test.y[i] ? 1 : 0;
  return 100.0 * static_cast<double>(correct) / static_cast<double>(pred.size());
}

AccuracySummary train_eval_classifier(const LabeledData& surrogate, const LabeledData& test,
                                      const EvalProtocol& protocol, const std::vector<std::uint64_t>& seeds) {
  require(surrogate.num_classes == test.num_classes, ErrorCode::invalid_argument,
          "surrogate and test sets have different class sets");
  require(surrogate.x.cols() == test.x.cols(), ErrorCode::invalid_argument,
          "surrogate and test items have different dimensions");
  require(!seeds.empty(), ErrorCode::invalid_argument, "at least one evaluation seed required");
  AccuracySummary s;
  for (std::uint64_t seed : seeds) {
    s.per_seed.push_back(top1_accuracy(train_classifier(surrogate, protocol, seed), test));
  }
  s.mean = std::accumulate(s.per_seed.begin(), s.per_seed.end(), 0.0) / static_cast<double>(s.per_seed.size());
  double var = 0.0;
  for (double a : s.per_seed) var += (a - s.mean) * (a - s.mean);
  s.std = std::sqrt(var / static_cast<double>(s.per_seed.size()));
  return s;
}

FeatureExtractor FeatureExtractor::identity() { return FeatureExtractor{}; }

FeatureExtractor FeatureExtractor::convnet(const LabeledData& train, const EvalProtocol& protocol,
                                           std::uint64_t seed) {
  EvalProtocol p = protocol;
  p.test_model = "conv3";
  FeatureExtractor f;
  f.model_ = std::make_shared<TrainedClassifier>(train_classifier(train, p, seed));
  return f;
}

Matrix FeatureExtractor::extract(const Matrix& x) const {
  if (!model_) return x;
  return model_->features(x);
}

}  // namespace mmdd
