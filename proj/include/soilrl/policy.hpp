#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "soilrl/config.hpp"
#include "soilrl/env.hpp"
#include "soilrl/nn.hpp"
#include "soilrl/rng.hpp"

namespace soilrl {

/// Maps an observation to a cleaning decision.
class Policy {
 public:
  virtual ~Policy() = default;
  /// Greedy (deterministic) action.
  virtual int act(const Observation& obs) const = 0;
  /// Sampled action; deterministic policies ignore the stream.
  virtual int sample(const Observation& obs, RandomStream&) const { return act(obs); }
  virtual std::string describe() const = 0;
};

/// Cleans whenever days_since_clean >= z, read back from the normalized
/// observation.
class FixedIntervalPolicy final : public Policy {
 public:
  FixedIntervalPolicy(int z, NormalizationMode mode);
  int act(const Observation& obs) const override;
  std::string describe() const override { return "fixed_interval(" + std::to_string(z_) + ")"; }
  int interval() const { return z_; }

 private:
  int z_;
  double scale_;
};

/// Softmax actor network: argmax when greedy, categorical draw when sampling.
class ActorPolicy final : public Policy {
 public:
  explicit ActorPolicy(DenseNet actor) : actor_(std::move(actor)) {}
  int act(const Observation& obs) const override;
  int sample(const Observation& obs, RandomStream& stream) const override;
  std::string describe() const override { return "actor"; }
  const DenseNet& network() const { return actor_; }
  /// P(clean | obs).
  double clean_probability(const Observation& obs) const;

 private:
  DenseNet actor_;
};

/// A trained actor plus the observation convention it was trained with.
struct PolicyFile {
  std::string agent;  // "ppo" or "sac"
  NormalizationMode normalization_mode = NormalizationMode::kFeatureScaled;
  bool include_humidity = false;
  std::string scenario;
  std::int64_t training_episodes = 0;
  std::uint64_t seed = 0;
  DenseNet actor;
};

std::string format_policy_file(const PolicyFile& pf);
PolicyFile parse_policy_file(std::string_view text);
void save_policy_file(const PolicyFile& pf, const std::string& path);
PolicyFile load_policy_file(const std::string& path);

enum class EvalMode { kGreedy, kStochastic };

struct EvaluationResult {
  double mean_total_cost = 0.0;
  double stderr_total_cost = 0.0;
  double mean_cleanings = 0.0;
  std::vector<double> episode_costs;
  std::vector<std::int64_t> episode_cleanings;
};

/// Default base seed for evaluation episodes, disjoint from training seeds.
std::uint64_t evaluation_seed(const ScenarioConfig& config);
/// Base seed of training episode streams.
std::uint64_t training_seed(const ScenarioConfig& config);

/// Runs `episodes` episodes; episode r uses replication_seed(base_seed, r),
/// the same scheme as the fixed-interval optimizer. Stochastic mode draws
/// actions from a stream derived from base_seed.
EvaluationResult evaluate(const Policy& policy, const ScenarioConfig& config, int episodes, std::uint64_t base_seed,
                          EvalMode mode = EvalMode::kGreedy, unsigned threads = 0);

}  // namespace soilrl
