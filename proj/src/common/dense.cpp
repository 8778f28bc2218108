#include "mmdd/dense.hpp"

#include <cmath>

#include "mmdd/error.hpp"

namespace mmdd {

namespace {

using ConstMap = Eigen::Map<const Matrix>;
using ConstVecMap = Eigen::Map<const Vector>;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Matrix activate(const Matrix& pre, Activation a) {
  switch (a) {
    case Activation::silu:
      return pre.unaryExpr([](double x) { return x * sigmoid(x); });
    case Activation::relu:
      return pre.cwiseMax(0.0);
    case Activation::tanh:
      return pre.array().tanh().matrix();
  }
  return pre;
}

Matrix activation_derivative(const Matrix& pre, Activation a) {
  switch (a) {
    case Activation::silu:
      return pre.unaryExpr([](double x) {
        const double s = sigmoid(x);
        return s * (1.0 + x * (1.0 - s));
      });
    case Activation::relu:
      return pre.unaryExpr([](double x) { return x > 0.0 ? 1.0 : 0.0; });
    case Activation::tanh:
      return pre.unaryExpr([](double x) {
        const double t = std::tanh(x);
        return 1.0 - t * t;
      });
  }
  return Matrix::Ones(pre.rows(), pre.cols());
}

}  // namespace

DenseStack::DenseStack(std::vector<int> widths, Activation activation)
    : widths_(std::move(widths)), activation_(activation) {
  require(widths_.size() >= 2, ErrorCode::invalid_argument, "dense stack needs at least two widths");
  for (int w : widths_) {
    require(w > 0, ErrorCode::invalid_argument, "dense stack widths must be positive");
  }
  for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
    offsets_.push_back(parameter_count_);
    parameter_count_ += static_cast<std::size_t>(widths_[l + 1]) * (widths_[l] + 1);
  }
}

void DenseStack::initialize(std::span<double> params, Rng& rng) const {
  require(params.size() == parameter_count_, ErrorCode::invalid_argument,
          "parameter buffer size mismatch");
  for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
    const int in = widths_[l];
    const int out = widths_[l + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    double* w = params.data() + offsets_[l];
    for (int i = 0; i < in * out; ++i) {
      w[i] = bound * (2.0 * rng.uniform() - 1.0);
    }
    for (int i = 0; i < out; ++i) {
      w[in * out + i] = 0.0;
    }
  }
}

Matrix DenseStack::forward(std::span<const double> params, const Matrix& x, Cache* cache) const {
  require(x.rows() == widths_.front(), ErrorCode::invalid_argument, "dense stack input width mismatch");
  if (cache) {
    cache->inputs.clear();
    cache->preactivations.clear();
  }
  Matrix h = x;
  const std::size_t layers = widths_.size() - 1;
  for (std::size_t l = 0; l < layers; ++l) {
    const int in = widths_[l];
    const int out = widths_[l + 1];
    ConstMap w(params.data() + offsets_[l], out, in);
    ConstVecMap b(params.data() + offsets_[l] + static_cast<std::size_t>(in) * out, out);
    if (cache) {
      cache->inputs.push_back(h);
    }
    Matrix pre = w * h;
    pre.colwise() += b;
    if (l + 1 < layers) {
      if (cache) {
        cache->preactivations.push_back(pre);
      }
      h = activate(pre, activation_);
    } else {
      h = std::move(pre);
    }
  }
  return h;
}

Matrix DenseStack::backward(std::span<const double> params, const Cache& cache, const Matrix& dy,
                            std::span<double> grad) const {
  const std::size_t layers = widths_.size() - 1;
  Matrix delta = dy;
  for (std::size_t li = layers; li-- > 0;) {
    const int in = widths_[li];
    const int out = widths_[li + 1];
    if (li + 1 < layers) {
      delta = delta.cwiseProduct(activation_derivative(cache.preactivations[li], activation_));
    }
    ConstMap w(params.data() + offsets_[li], out, in);
    Eigen::Map<Matrix> gw(grad.data() + offsets_[li], out, in);
    Eigen::Map<Vector> gb(grad.data() + offsets_[li] + static_cast<std::size_t>(in) * out, out);
    gw.noalias() += delta * cache.inputs[li].transpose();
    gb += delta.rowwise().sum();
    delta = w.transpose() * delta;
  }
  return delta;
}

}  // namespace mmdd
