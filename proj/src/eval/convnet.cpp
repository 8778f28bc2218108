#include <array>
#include <cmath>

#include "mmdd/error.hpp"
#include "mmdd/eval/classifier.hpp"

namespace mmdd {

namespace {

constexpr std::array<int, 3> kChannels{8, 16, 32};
constexpr int kPooledBlocks = 2;

struct BlockShape {
  int in_c, out_c, h, w;  // conv runs at h x w
  bool pooled;
  int out_h() const { return pooled ? h / 2 : h; }
  int out_w() const { return pooled ? w / 2 : w; }
};

// Per-sample activations are (channels x pixels) matrices.
Matrix im2col(const Matrix& in, int h, int w) {
  const int c = static_cast<int>(in.rows());
  Matrix cols = Matrix::Zero(c * 9, h * w);
  for (int ci = 0; ci < c; ++ci)
    for (int ky = 0; ky < 3; ++ky)
      for (int kx = 0; kx < 3; ++kx) {
        const int r = ci * 9 + ky * 3 + kx;
        for (int y = 0; y < h; ++y) {
          const int sy = y + ky - 1;
          if (sy < 0 || sy >= h) continue;
          for (int x = 0; x < w; ++x) {
            const int sx = x + kx - 1;
            if (sx < 0 || sx >= w) continue;
            cols(r, y * w + x) = in(ci, sy * w + sx);
          }
        }
      }
  return cols;
}

Matrix col2im(const Matrix& cols, int c, int h, int w) {
  Matrix out = Matrix::Zero(c, h * w);
  for (int ci = 0; ci < c; ++ci)
    for (int ky = 0; ky < 3; ++ky)
      for (int kx = 0; kx < 3; ++kx) {
        const int r = ci * 9 + ky * 3 + kx;
        for (int y = 0; y < h; ++y) {
          const int sy = y + ky - 1;
          if (sy < 0 || sy >= h) continue;
          for (int x = 0; x < w; ++x) {
            const int sx = x + kx - 1;
            if (sx < 0 || sx >= w) continue;
            out(ci, sy * w + sx) += cols(r, y * w + x);
          }
        }
      }
  return out;
}

class ConvNet3 final : public TrainableNet {
 public:
  ConvNet3(const ImageShape& shape, int num_classes) : shape_(shape), classes_(num_classes) {
    require(shape.channels >= 1 && shape.height >= 4 && shape.width >= 4, ErrorCode::invalid_argument,
            "conv3 needs images of at least 4x4");
    int c = shape.channels, h = shape.height, w = shape.width;
    std::size_t offset = 0;
    for (int l = 0; l < static_cast<int>(kChannels.size()); ++l) {
      BlockShape b{c, kChannels[l], h, w, l < kPooledBlocks};
      blocks_.push_back(b);
      offsets_.push_back(offset);
      offset += static_cast<std::size_t>(b.out_c) * (b.in_c * 9 + 1);
      c = b.out_c;
      h = b.out_h();
      w = b.out_w();
    }
    head_offset_ = offset;
    count_ = offset + static_cast<std::size_t>(classes_) * (kChannels.back() + 1);
  }

  std::size_t parameter_count() const override { return count_; }

  void initialize(std::span<double> params, Rng& rng) const override {
    std::fill(params.begin(), params.end(), 0.0);
    for (std::size_t l = 0; l < blocks_.size(); ++l) {
      const auto& b = blocks_[l];
      const int fan_in = b.in_c * 9;
      const double bound = std::sqrt(6.0 / fan_in);
      for (int i = 0; i < b.out_c * fan_in; ++i) params[offsets_[l] + i] = bound * (2.0 * rng.uniform() - 1.0);
    }
    const double bound = 1.0 / std::sqrt(static_cast<double>(kChannels.back()));
    for (int i = 0; i < classes_ * kChannels.back(); ++i) params[head_offset_ + i] = bound * (2.0 * rng.uniform() - 1.0);
  }

  Matrix forward(std::span<const double> params, const Matrix& x) override {
    cache_.assign(x.rows(), {});
    Matrix logits(x.rows(), classes_);
    auto [hw, hb] = head(params);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const Vector feat = trunk(params, x.row(i), &cache_[i]);
      logits.row(i) = (hw * feat + hb).transpose();
    }
    return logits;
  }

  void backward(std::span<const double> params, const Matrix& d_logits, std::span<double> grad) override {
    auto [hw, hb] = head(params);
    Eigen::Map<Matrix> ghw(grad.data() + head_offset_, classes_, kChannels.back());
    Eigen::Map<Vector> ghb(grad.data() + head_offset_ + static_cast<std::size_t>(classes_) * kChannels.back(), classes_);
    for (Eigen::Index i = 0; i < d_logits.rows(); ++i) {
      const SampleCache& sc = cache_[i];
      const Vector dl = d_logits.row(i).transpose();
      ghw.noalias() += dl * sc.feature.transpose();
      ghb += dl;
      const Vector dfeat = hw.transpose() * dl;

      const auto& last = blocks_.back();
      const int pixels = last.out_h() * last.out_w();
      Matrix d_out = (dfeat / static_cast<double>(pixels)).replicate(1, pixels);
      for (std::size_t l = blocks_.size(); l-- > 0;) {
        const auto& b = blocks_[l];
        Matrix d_act = d_out;
        if (b.pooled) {
          d_act = Matrix::Zero(b.out_c, b.h * b.w);
          for (int c = 0; c < b.out_c; ++c)
            for (int y = 0; y < b.out_h() * 2; ++y)
              for (int xx = 0; xx < b.out_w() * 2; ++xx)
                d_act(c, y * b.w + xx) = 0.25 * d_out(c, (y / 2) * b.out_w() + xx / 2);
        }
        const Matrix d_pre = d_act.cwiseProduct(sc.pre[l].unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; }));
        auto [w, bias] = conv(params, l);
        Eigen::Map<Matrix> gw(grad.data() + offsets_[l], b.out_c, b.in_c * 9);
        Eigen::Map<Vector> gb(grad.data() + offsets_[l] + static_cast<std::size_t>(b.out_c) * b.in_c * 9, b.out_c);
        gw.noalias() += d_pre * sc.cols[l].transpose();
        gb += d_pre.rowwise().sum();
        if (l > 0) d_out = col2im(w.transpose() * d_pre, b.in_c, b.h, b.w);
      }
    }
  }

  Matrix features(std::span<const double> params, const Matrix& x) override {
    Matrix f(x.rows(), kChannels.back());
    for (Eigen::Index i = 0; i < x.rows(); ++i) f.row(i) = trunk(params, x.row(i), nullptr).transpose();
    return f;
  }

 private:
  struct SampleCache {
    std::vector<Matrix> cols;
    std::vector<Matrix> pre;
    Vector feature;
  };

  using ConstMap = Eigen::Map<const Matrix>;
  using ConstVec = Eigen::Map<const Vector>;

  std::pair<ConstMap, ConstVec> conv(std::span<const double> params, std::size_t l) const {
    const auto& b = blocks_[l];
    return {ConstMap(params.data() + offsets_[l], b.out_c, b.in_c * 9),
            ConstVec(params.data() + offsets_[l] + static_cast<std::size_t>(b.out_c) * b.in_c * 9, b.out_c)};
  }

  std::pair<ConstMap, ConstVec> head(std::span<const double> params) const {
    return {ConstMap(params.data() + head_offset_, classes_, kChannels.back()),
            ConstVec(params.data() + head_offset_ + static_cast<std::size_t>(classes_) * kChannels.back(), classes_)};
  }

  Vector trunk(std::span<const double> params, const Eigen::RowVectorXd& flat, SampleCache* sc) const {
    const int hw0 = shape_.height * shape_.width;
    Matrix act(shape_.channels, hw0);
    for (int c = 0; c < shape_.channels; ++c) act.row(c) = flat.segment(static_cast<Eigen::Index>(c) * hw0, hw0);
    for (std::size_t l = 0; l < blocks_.size(); ++l) {
      const auto& b = blocks_[l];
      Matrix cols = im2col(act, b.h, b.w);
      auto [w, bias] = conv(params, l);
      Matrix pre = w * cols;
      pre.colwise() += bias;
      Matrix out = pre.cwiseMax(0.0);
      if (b.pooled) {
        Matrix pooled(b.out_c, b.out_h() * b.out_w());
        for (int c = 0; c < b.out_c; ++c)
          for (int y = 0; y < b.out_h(); ++y)
            for (int xx = 0; xx < b.out_w(); ++xx) {
              const int p = 2 * y * b.w + 2 * xx;
              pooled(c, y * b.out_w() + xx) = 0.25 * (out(c, p) + out(c, p + 1) + out(c, p + b.w) + out(c, p + b.w + 1));
            }
        out = std::move(pooled);
      }
      if (sc) {
        sc->cols.push_back(std::move(cols));
        sc->pre.push_back(std::move(pre));
      }
      act = std::move(out);
    }
    Vector feature = act.rowwise().mean();
    if (sc) sc->feature = feature;
    return feature;
  }

  ImageShape shape_;
  int classes_;
  std::vector<BlockShape> blocks_;
  std::vector<std::size_t> offsets_;
  std::size_t head_offset_ = 0;
  std::size_t count_ = 0;
  std::vector<SampleCache> cache_;
};

}  // namespace

std::unique_ptr<TrainableNet> make_conv3(const ImageShape& shape, int num_classes) {
  return std::make_unique<ConvNet3>(shape, num_classes);
}

}  // namespace mmdd
