#pragma once

#include "mmdd/diffusion/schedule.hpp"
#include "mmdd/types.hpp"

namespace mmdd {

enum class CleanEstimate {
  paper_literal,  // z_hat = z_t - eps_pred
  ddpm_exact,     // z_hat = (z_t - sqrt(1 - abar) eps_pred) / sqrt(abar)
};

std::string to_string(CleanEstimate mode);
CleanEstimate clean_estimate_from_string(const std::string& name);

struct NoisingSample {
  Vector z0;
  int t = 0;
  Vector eps;
  Vector zt;
};

Vector forward_noise(const Vector& z0, int t, const Vector& eps, const NoiseSchedule& schedule);

// Row-wise forward noising with a per-row step.
Matrix forward_noise(const Matrix& z0, const std::vector<int>& t, const Matrix& eps,
                     const NoiseSchedule& schedule);

NoisingSample make_noising_sample(const Vector& z0, int t, const Vector& eps,
                                  const NoiseSchedule& schedule);

double simple_loss(const Vector& eps_pred, const Vector& eps);
// Batch mean of per-row squared error.
double simple_loss(const Matrix& eps_pred, const Matrix& eps);

Vector predict_clean_embedding(const Vector& zt, const Vector& eps_pred, CleanEstimate mode, int t,
                               const NoiseSchedule& schedule);

// d z_hat / d eps_pred, a scalar multiple of the identity for both modes.
double clean_estimate_slope(CleanEstimate mode, int t, const NoiseSchedule& schedule);

}  // namespace mmdd
