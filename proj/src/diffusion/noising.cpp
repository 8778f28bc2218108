#include "mmdd/diffusion/noising.hpp"

#include <cmath>

#include "mmdd/error.hpp"

namespace mmdd {

namespace {

void check_step(int t, const NoiseSchedule& schedule) {
  require(t >= 1 && t <= schedule.steps, ErrorCode::invalid_argument,
          "time step " + std::to_string(t) + " outside [1, " + std::to_string(schedule.steps) + "]");
}

}  // namespace

std::string to_string(CleanEstimate mode) {
  return mode == CleanEstimate::paper_literal ? "paper_literal" : "ddpm_exact";
}

CleanEstimate clean_estimate_from_string(const std::string& name) {
  if (name == "paper_literal") return CleanEstimate::paper_literal;
  if (name == "ddpm_exact") return CleanEstimate::ddpm_exact;
  fail(ErrorCode::invalid_argument, "unknown clean-estimate mode '" + name + "'");
}

Vector forward_noise(const Vector& z0, int t, const Vector& eps, const NoiseSchedule& schedule) {
  require(z0.size() == eps.size(), ErrorCode::invalid_argument, "z0 and eps dimension mismatch");
  check_step(t, schedule);
  return schedule.signal_rate(t) * z0 + schedule.noise_rate(t) * eps;
}

Matrix forward_noise(const Matrix& z0, const std::vector<int>& t, const Matrix& eps,
                     const NoiseSchedule& schedule) {
  require(z0.rows() == eps.rows() && z0.cols() == eps.cols(), ErrorCode::invalid_argument,
          "z0 and eps shape mismatch");
  require(static_cast<Eigen::Index>(t.size()) == z0.rows(), ErrorCode::invalid_argument,
          "one time step per row required");
  Matrix zt(z0.rows(), z0.cols());
  for (Eigen::Index i = 0; i < z0.rows(); ++i) {
    check_step(t[i], schedule);
    zt.row(i) = schedule.signal_rate(t[i]) * z0.row(i) + schedule.noise_rate(t[i]) * eps.row(i);
  }
  return zt;
}

NoisingSample make_noising_sample(const Vector& z0, int t, const Vector& eps,
                                  const NoiseSchedule& schedule) {
  return NoisingSample{z0, t, eps, forward_noise(z0, t, eps, schedule)};
}

double simple_loss(const Vector& eps_pred, const Vector& eps) {
  require(eps_pred.size() == eps.size(), ErrorCode::invalid_argument, "simple loss dimension mismatch");
  return (eps_pred - eps).squaredNorm();
}

double simple_loss(const Matrix& eps_pred, const Matrix& eps) {
  require(eps_pred.rows() == eps.rows() && eps_pred.cols() == eps.cols(), ErrorCode::invalid_argument,
          "simple loss shape mismatch");
  if (eps.rows() == 0) {
    return 0.0;
  }
  return (eps_pred - eps).squaredNorm() / static_cast<double>(eps.rows());
}

Vector predict_clean_embedding(const Vector& zt, const Vector& eps_pred, CleanEstimate mode, int t,
                               const NoiseSchedule& schedule) {
  require(zt.size() == eps_pred.size(), ErrorCode::invalid_argument,
          "z_t and predicted noise dimension mismatch");
  if (mode == CleanEstimate::paper_literal) {
    return zt - eps_pred;
  }
  check_step(t, schedule);
  return (zt - schedule.noise_rate(t) * eps_pred) / schedule.signal_rate(t);
}

double clean_estimate_slope(CleanEstimate mode, int t, const NoiseSchedule& schedule) {
  if (mode == CleanEstimate::paper_literal) {
    return -1.0;
  }
  check_step(t, schedule);
  return -schedule.noise_rate(t) / schedule.signal_rate(t);
}

}  // namespace mmdd
