#pragma once

#include <cstdint>
#include <vector>

#include "soilrl/config.hpp"

namespace soilrl {

/// Replicated cost of one fixed cleaning interval.
struct IntervalEvaluation {
  int z = 0;
  double mean_total_cost = 0.0;
  double stderr_total_cost = 0.0;
  double mean_cleanings = 0.0;
  std::vector<double> replication_costs;
};

struct SimOptResult {
  int z_star = 0;
  std::vector<IntervalEvaluation> curve;  // one entry per z in [z_min, z_max]

  const IntervalEvaluation& best() const;
};

/// Seed of replication r. Shared by every interval (common random numbers)
/// and by agents::evaluate when asked to reuse the same seeds.
std::uint64_t replication_seed(std::uint64_t base_seed, int replication);

/// Runs `replications` episodes cleaning on each morning where
/// days_since_clean >= z. Replication r uses replication_seed(config.seed, r).
IntervalEvaluation evaluate_interval(int z, const ScenarioConfig& config, int replications = 30,
                                     unsigned threads = 0);

/// Exhaustive search over z in [z_min, z_max]; ties go to the smaller z.
SimOptResult optimize(const ScenarioConfig& config, int z_min = 1, int z_max = 120, int replications = 30,
                      unsigned threads = 0);

}  // namespace soilrl
