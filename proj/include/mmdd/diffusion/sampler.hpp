#pragma once

#include <cstdint>
#include <vector>

#include "mmdd/diffusion/denoiser.hpp"
#include "mmdd/diffusion/schedule.hpp"

namespace mmdd {

struct SamplerOptions {
  // false: deterministic DDIM update (eta = 0). true: ancestral update with eta = 1.
  bool stochastic = false;
};

// Evenly spaced sub-schedule s_1 < ... < s_n = T with s_k = floor(k T / n).
std::vector<int> sampling_timesteps(int total_steps, int n_steps);

// Generates `count` embeddings of class `label` by iterative denoising from
// standard-normal starts. Identical arguments give bit-identical output.
Matrix ancestral_sample(const Denoiser& model, const NoiseSchedule& schedule, int label, int n_steps,
                        int count, std::uint64_t seed, const SamplerOptions& options = {});

}  // namespace mmdd
