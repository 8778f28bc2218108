#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <json.hpp>

#include "mmdd/dense.hpp"
#include "mmdd/diffusion/schedule.hpp"
#include "mmdd/types.hpp"

namespace mmdd {

struct DenoiserConfig {
  int dimension = 2;
  int num_classes = 1;
  int num_steps = 1000;  // T of the schedule the model is conditioned on
  int time_features = 16;
  int class_embedding_dim = 8;
  int hidden_width = 64;
  int hidden_layers = 2;
  Activation activation = Activation::silu;
};

// Class-conditional noise predictor eps_theta(z_t, t, c): an MLP over
// [z_t, sinusoidal features of t/T, learned class embedding].
// Parameter layout: class table (E x C, column-major) then the dense stack.
class Denoiser {
 public:
  struct Pass {
    Matrix input;  // stacked network input, features x N
    DenseStack::Cache cache;
  };

  Denoiser() = default;
  Denoiser(const DenoiserConfig& config, std::uint64_t seed);

  const DenoiserConfig& config() const { return config_; }
  int dimension() const { return config_.dimension; }
  std::size_t parameter_count() const { return params_.size(); }

  std::vector<double>& parameters() { return params_; }
  const std::vector<double>& parameters() const { return params_; }

  // zt: N x d, returns N x d. Pure function of (parameters, inputs).
  Matrix predict_noise(const Matrix& zt, const std::vector<int>& t, const Labels& labels) const;
  Matrix forward(const Matrix& zt, const std::vector<int>& t, const Labels& labels, Pass* pass) const;

  // d_eps: N x d gradient of the loss w.r.t. predicted noise. Accumulates into grad.
  void backward(const Pass& pass, const Matrix& d_eps, const Labels& labels,
                std::span<double> grad) const;

  Vector time_features(int t) const;

  void save(const std::filesystem::path& path, const NoiseSchedule& schedule,
            const nlohmann::json& mode_flags) const;
  static Denoiser load(const std::filesystem::path& path, nlohmann::json* meta = nullptr);

 private:
  std::size_t class_table_size() const {
    return static_cast<std::size_t>(config_.class_embedding_dim) * config_.num_classes;
  }

  DenoiserConfig config_;
  DenseStack stack_;
  std::vector<double> params_;
};

std::string to_string(Activation a);
Activation activation_from_string(const std::string& name);

}  // namespace mmdd
