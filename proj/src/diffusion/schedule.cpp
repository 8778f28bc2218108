#include "mmdd/diffusion/schedule.hpp"

#include <cmath>
#include <numbers>

#include "mmdd/error.hpp"

namespace mmdd {

std::string to_string(ScheduleKind kind) {
  return kind == ScheduleKind::linear ? "linear" : "cosine";
}

ScheduleKind schedule_kind_from_string(const std::string& name) {
  if (name == "linear") return ScheduleKind::linear;
  if (name == "cosine") return ScheduleKind::cosine;
  fail(ErrorCode::invalid_argument, "unknown schedule kind '" + name + "'");
}

double NoiseSchedule::signal_rate(int t) const { return std::sqrt(alpha_bar.at(t)); }

double NoiseSchedule::noise_rate(int t) const { return std::sqrt(1.0 - alpha_bar.at(t)); }

NoiseSchedule make_noise_schedule(int steps, ScheduleKind kind) {
  require(steps >= 1, ErrorCode::invalid_argument, "schedule step count must be positive");
  NoiseSchedule s;
  s.steps = steps;
  s.kind = kind;
  s.betas.assign(steps + 1, 0.0);
  s.alpha_bar.assign(steps + 1, 1.0);

  if (kind == ScheduleKind::linear) {
    for (int t = 1; t <= steps; ++t) {
      const double frac = steps == 1 ? 0.0 : static_cast<double>(t - 1) / (steps - 1);
      s.betas[t] = kLinearBetaStart + frac * (kLinearBetaEnd - kLinearBetaStart);
    }
  } else {
    // Squared-cosine cumulative schedule with offset 0.008; betas clipped at 0.999.
    constexpr double offset = 0.008;
    auto f = [&](int t) {
      const double x = (static_cast<double>(t) / steps + offset) / (1.0 + offset);
      const double c = std::cos(x * std::numbers::pi / 2.0);
      return c * c;
    };
    const double f0 = f(0);
    for (int t = 1; t <= steps; ++t) {
      const double beta = 1.0 - (f(t) / f0) / (f(t - 1) / f0);
      s.betas[t] = std::min(std::max(beta, 1e-8), 0.999);
    }
  }
  for (int t = 1; t <= steps; ++t) {
    s.alpha_bar[t] = s.alpha_bar[t - 1] * (1.0 - s.betas[t]);
  }
  return s;
}

}  // namespace mmdd
