#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace soilrl {

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> value_targets;  // advantages + values
};

/// Generalized advantage estimation over one rollout.
///
///   delta_t = r_t + gamma * V(s_{t+1}) * (1 - done_t) - V(s_t)
///   A_t     = delta_t + gamma * lambda * (1 - done_t) * A_{t+1}
///
/// V(s_T) for the step after the last is `bootstrap_value`. `dones` marks
/// episode ends; the sum never crosses one. Throws std::invalid_argument on
/// length mismatch.
GaeResult compute_gae(std::span<const double> rewards, std::span<const double> values,
                      std::span<const std::uint8_t> dones, double bootstrap_value, double gamma, double lambda);

/// In-place shift/scale to zero mean and unit (population) variance.
void normalize_advantages(std::span<double> advantages);

}  // namespace soilrl
