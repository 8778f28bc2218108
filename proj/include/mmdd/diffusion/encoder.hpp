#pragma once

#include <filesystem>

#include "mmdd/types.hpp"

namespace mmdd {

// Maps data items (images flattened, or raw vectors) to the embedding space the
// denoiser works in. Identity by default; the linear variant is a principal
// component projection scaled to unit average variance.
class EncoderDecoder {
 public:
  static EncoderDecoder identity(int dimension);
  // Fits on rows of `data`. latent_dim must not exceed the data dimension.
  static EncoderDecoder linear_projection(const Matrix& data, int latent_dim);

  bool is_identity() const { return identity_; }
  int input_dimension() const { return input_dim_; }
  int latent_dimension() const { return latent_dim_; }

  Matrix encode(const Matrix& x) const;
  Matrix decode(const Matrix& z) const;

  void save(const std::filesystem::path& path) const;
  static EncoderDecoder load(const std::filesystem::path& path);

 private:
  bool identity_ = true;
  int input_dim_ = 0;
  int latent_dim_ = 0;
  Vector mean_;
  Matrix basis_;  // input_dim x latent_dim, orthonormal columns
  double scale_ = 1.0;
};

}  // namespace mmdd
