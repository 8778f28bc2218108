#pragma once

#include <string>
#include <vector>

namespace mmdd {

enum class ScheduleKind { linear, cosine };

std::string to_string(ScheduleKind kind);
ScheduleKind schedule_kind_from_string(const std::string& name);

// Discrete forward-noising schedule. alpha_bar has T+1 entries with
// alpha_bar[0] == 1 and alpha_bar[t] = prod_{s<=t} (1 - betas[s]).
// betas[0] is unused and stored as 0 so indices line up with steps.
struct NoiseSchedule {
  int steps = 0;
  ScheduleKind kind = ScheduleKind::linear;
  std::vector<double> betas;
  std::vector<double> alpha_bar;

  double signal_rate(int t) const;  // sqrt(alpha_bar[t])
  double noise_rate(int t) const;   // sqrt(1 - alpha_bar[t])
};

inline constexpr double kLinearBetaStart = 1e-4;
inline constexpr double kLinearBetaEnd = 2e-2;

NoiseSchedule make_noise_schedule(int steps, ScheduleKind kind);

}  // namespace mmdd
