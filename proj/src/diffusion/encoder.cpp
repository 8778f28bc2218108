#include "mmdd/diffusion/encoder.hpp"

#include <cmath>

#include "mmdd/archive.hpp"
#include "mmdd/error.hpp"

namespace mmdd {

EncoderDecoder EncoderDecoder::identity(int dimension) {
  require(dimension > 0, ErrorCode::invalid_argument, "encoder dimension must be positive");
  EncoderDecoder e;
  e.identity_ = true;
  e.input_dim_ = dimension;
  e.latent_dim_ = dimension;
  return e;
}

EncoderDecoder EncoderDecoder::linear_projection(const Matrix& data, int latent_dim) {
  require(data.rows() >= 2, ErrorCode::insufficient_data, "projection encoder needs at least two rows");
  require(latent_dim > 0 && latent_dim <= data.cols(), ErrorCode::invalid_argument,
          "latent dimension must be in [1, data dimension]");
  EncoderDecoder e;
  e.identity_ = false;
  e.input_dim_ = static_cast<int>(data.cols());
  e.latent_dim_ = latent_dim;
  e.mean_ = data.colwise().mean().transpose();
  const Matrix centered = data.rowwise() - e.mean_.transpose();
  const Matrix cov = centered.transpose() * centered / static_cast<double>(data.rows() - 1);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(cov);
  require(solver.info() == Eigen::Success, ErrorCode::numeric, "eigendecomposition failed");
  // Eigenvalues ascend; keep the trailing latent_dim columns in descending order.
  e.basis_.resize(e.input_dim_, latent_dim);
  double kept = 0.0;
  for (int k = 0; k < latent_dim; ++k) {
    const int src = e.input_dim_ - 1 - k;
    Vector v = solver.eigenvectors().col(src);
    // Sign convention: largest-magnitude entry positive, so the fit is reproducible.
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    e.basis_.col(k) = v;
    kept += std::max(solver.eigenvalues()(src), 0.0);
  }
  const double avg = kept / latent_dim;
  e.scale_ = avg > 0 ? std::sqrt(avg) : 1.0;
  return e;
}

Matrix EncoderDecoder::encode(const Matrix& x) const {
  require(x.cols() == input_dim_, ErrorCode::invalid_argument, "encoder input dimension mismatch");
  if (identity_) {
    return x;
  }
  return ((x.rowwise() - mean_.transpose()) * basis_) / scale_;
}

Matrix EncoderDecoder::decode(const Matrix& z) const {
  require(z.cols() == latent_dim_, ErrorCode::invalid_argument, "decoder input dimension mismatch");
  if (identity_) {
    return z;
  }
  Matrix x = (z * scale_) * basis_.transpose();
  x.rowwise() += mean_.transpose();
  return x;
}

void EncoderDecoder::save(const std::filesystem::path& path) const {
  ArrayArchive archive;
  archive.meta = {{"identity", identity_}, {"input_dim", input_dim_},
                  {"latent_dim", latent_dim_}, {"scale", scale_}};
  if (!identity_) {
    archive.put("mean", {input_dim_}, std::vector<double>(mean_.data(), mean_.data() + mean_.size()));
    // Stored row-major (input_dim x latent_dim).
    std::vector<double> basis(static_cast<std::size_t>(input_dim_) * latent_dim_);
    for (int i = 0; i < input_dim_; ++i)
      for (int k = 0; k < latent_dim_; ++k) basis[static_cast<std::size_t>(i) * latent_dim_ + k] = basis_(i, k);
    archive.put("basis", {input_dim_, latent_dim_}, std::move(basis));
  }
  write_archive(path, archive);
}

EncoderDecoder EncoderDecoder::load(const std::filesystem::path& path) {
  ArrayArchive archive = read_archive(path);
  EncoderDecoder e;
  e.identity_ = archive.meta.at("identity").get<bool>();
  e.input_dim_ = archive.meta.at("input_dim").get<int>();
  e.latent_dim_ = archive.meta.at("latent_dim").get<int>();
  e.scale_ = archive.meta.at("scale").get<double>();
  if (!e.identity_) {
    const auto& mean = archive.get("mean").data;
    e.mean_ = Eigen::Map<const Vector>(mean.data(), static_cast<Eigen::Index>(mean.size()));
    const auto& basis = archive.get("basis").data;
    e.basis_.resize(e.input_dim_, e.latent_dim_);
    for (int i = 0; i < e.input_dim_; ++i)
      for (int k = 0; k < e.latent_dim_; ++k) e.basis_(i, k) = basis[static_cast<std::size_t>(i) * e.latent_dim_ + k];
  }
  return e;
}

}  // namespace mmdd
