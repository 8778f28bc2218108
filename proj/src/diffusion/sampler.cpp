#include "mmdd/diffusion/sampler.hpp"

#include <cmath>

#include "mmdd/error.hpp"
#include "mmdd/random.hpp"

namespace mmdd {

std::vector<int> sampling_timesteps(int total_steps, int n_steps) {
  require(n_steps >= 1, ErrorCode::invalid_argument, "sampling step count must be positive");
  require(n_steps <= total_steps, ErrorCode::invalid_argument,
          "sampling step count exceeds schedule length");
  std::vector<int> steps(n_steps);
  for (int k = 1; k <= n_steps; ++k) {
    steps[k - 1] = static_cast<int>((static_cast<long long>(k) * total_steps) / n_steps);
  }
  return steps;
}

Matrix ancestral_sample(const Denoiser& model, const NoiseSchedule& schedule, int label, int n_steps,
                        int count, std::uint64_t seed, const SamplerOptions& options) {
  require(count >= 0, ErrorCode::invalid_argument, "sample count must be nonnegative");
  require(model.config().num_steps == schedule.steps, ErrorCode::invalid_argument,
          "model was configured for a different schedule length");
  const std::vector<int> steps = sampling_timesteps(schedule.steps, n_steps);
  const int d = model.dimension();
  if (count == 0) {
    return Matrix(0, d);
  }

  Rng rng(seed);
  Matrix x = rng.gaussian_matrix(count, d);
  const Labels labels(count, label);
  for (int k = n_steps; k >= 1; --k) {
    const int t = steps[k - 1];
    const double ab = schedule.alpha_bar[t];
    const double ab_prev = k > 1 ? schedule.alpha_bar[steps[k - 2]] : 1.0;
    const Matrix eps = model.predict_noise(x, std::vector<int>(count, t), labels);
    const Matrix x0 = (x - std::sqrt(1.0 - ab) * eps) / std::sqrt(ab);

    double sigma = 0.0;
    if (options.stochastic) {
      sigma = std::sqrt((1.0 - ab_prev) / (1.0 - ab)) * std::sqrt(1.0 - ab / ab_prev);
    }
    const double dir = std::sqrt(std::max(1.0 - ab_prev - sigma * sigma, 0.0));
    x = std::sqrt(ab_prev) * x0 + dir * eps;
    if (sigma > 0.0) {
      x += sigma * rng.gaussian_matrix(count, d);
    }
  }
  return x;
}

}  // namespace mmdd
