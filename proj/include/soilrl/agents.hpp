#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "soilrl/config.hpp"
#include "soilrl/env.hpp"
#include "soilrl/nn.hpp"
#include "soilrl/policy.hpp"
#include "soilrl/rng.hpp"

namespace soilrl {

// ---------------------------------------------------------------------------
// PPO

struct PPOConfig {
  double learning_rate = 0.0005;
  double gamma = 0.99;
  double gae_lambda = 0.97;
  double clip_epsilon = 0.012;
  int learning_epochs = 5;
  std::size_t minibatch_size = 256;
  double value_loss_coefficient = 0.5;
  double entropy_coefficient = 0.0;
  double max_grad_norm = 0.5;
  std::size_t hidden = 256;

  void validate() const;
};

/// One on-policy episode as collected by the behaviour policy.
struct Rollout {
  Matrix observations;  // T x obs_dim
  std::vector<int> actions;
  std::vector<double> log_probs;  // behaviour log pi(a|s)
  std::vector<double> values;
  std::vector<double> rewards;
  std::vector<std::uint8_t> dones;

  std::size_t size() const { return actions.size(); }
};

struct PPOUpdateStats {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double clip_fraction = 0.0;
  double approx_kl = 0.0;
  int minibatches = 0;
};

/// Per-sample clipped surrogate min(r A, clip(r, 1-eps, 1+eps) A).
double ppo_surrogate(double ratio, double advantage, double eps);
/// d ppo_surrogate / d ratio: A where the unclipped term is selected, else 0.
double ppo_surrogate_grad(double ratio, double advantage, double eps);

/// Actor (obs -> hidden relu -> 2 softmax) and critic (obs -> hidden relu -> 1),
/// each with its own Adam state.
class PPOAgent {
 public:
  PPOAgent(std::size_t obs_dim, PPOConfig config, std::uint64_t seed);

  const PPOConfig& config() const { return cfg_; }
  DenseNet& actor() { return actor_; }
  DenseNet& critic() { return critic_; }
  const DenseNet& actor() const { return actor_; }
  const DenseNet& critic() const { return critic_; }

  /// Draws an action from the current policy; reports its log-probability and
  /// the critic's value estimate.
  int act(const Observation& obs, RandomStream& stream, double& log_prob, double& value);

  /// `learning_epochs` passes of shuffled minibatches over the rollout.
  /// Throws NumericError on a non-finite loss or parameter.
  PPOUpdateStats update(const Rollout& rollout);

 private:
  PPOConfig cfg_;
  DenseNet actor_;
  DenseNet critic_;
  AdamOptimizer actor_opt_;
  AdamOptimizer critic_opt_;
  RandomStream shuffle_;
  ForwardCache act_cache_;
  Matrix act_input_;
};

// ---------------------------------------------------------------------------
// Discrete SAC

struct SACConfig {
  double gamma = 0.99;
  double target_update_rate = 0.005;
  double entropy_alpha = 0.2;
  double learning_rate = 0.0003;
  std::size_t replay_capacity = 100000;
  std::size_t batch_size = 256;
  std::int64_t warmup_steps = 1000;
  /// Environment steps between gradient updates (1 = every step).
  std::int64_t update_interval = 1;
  std::size_t hidden = 256;

  void validate() const;
};

struct Transition {
  Observation observation;
  int action = 0;
  double reward = 0.0;
  Observation next_observation;
  bool done = false;
};

/// Fixed-capacity ring buffer; uniform sampling with replacement.
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, std::size_t obs_dim);
  void add(const Transition& t);
  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }

  struct Batch {
    Matrix observations;
    Matrix next_observations;
    std::vector<int> actions;
    std::vector<double> rewards;
    std::vector<double> dones;
  };
  Batch sample(std::size_t batch_size, RandomStream& stream) const;

 private:
  std::size_t capacity_;
  std::size_t obs_dim_;
  std::size_t size_ = 0;
  std::size_t head_ = 0;
  std::vector<double> obs_;
  std::vector<double> next_obs_;
  std::vector<int> actions_;
  std::vector<double> rewards_;
  std::vector<double> dones_;
};

struct SACUpdateStats {
  double q1_loss = 0.0;
  double q2_loss = 0.0;
  double policy_loss = 0.0;
  double entropy = 0.0;
};

/// alpha * H(p) for a distribution over actions.
double entropy_bonus(std::span<const double> probs, double alpha);
/// sum_a p(a) [q(a) - alpha log p(a)].
double soft_state_value(std::span<const double> probs, std::span<const double> log_probs,
                        std::span<const double> q, double alpha);
/// r + gamma (1 - done) V(s').
double soft_q_target(double reward, bool done, double gamma, double next_soft_value);

/// Policy obs -> h -> h -> 2 softmax; two Q networks (obs + one-hot action)
/// -> h -> h -> 1 and their Polyak-averaged targets.
class SACAgent {
 public:
  SACAgent(std::size_t obs_dim, SACConfig config, std::uint64_t seed);

  const SACConfig& config() const { return cfg_; }
  const DenseNet& policy() const { return policy_; }
  DenseNet& policy() { return policy_; }
  const DenseNet& q1() const { return q1_; }
  const DenseNet& q2() const { return q2_; }
  const DenseNet& q1_target() const { return q1_target_; }
  const DenseNet& q2_target() const { return q2_target_; }
  DenseNet& q1() { return q1_; }
  DenseNet& q2() { return q2_; }

  int act(const Observation& obs, RandomStream& stream) const;
  /// One gradient step on both critics and the policy, then Polyak targets.
  SACUpdateStats update(const ReplayBuffer::Batch& batch);
  void update_targets(double rate);

 private:
  /// Q(s, a) for a in {0, 1} as an n x 2 matrix.
  Matrix q_both(const DenseNet& q, const Matrix& obs) const;

  SACConfig cfg_;
  std::size_t obs_dim_;
  DenseNet policy_, q1_, q2_, q1_target_, q2_target_;
  AdamOptimizer policy_opt_, q1_opt_, q2_opt_;
};

// ---------------------------------------------------------------------------
// Training / evaluation loops

enum class AgentKind { kPPO, kSAC };
std::string_view to_string(AgentKind k);
AgentKind parse_agent_kind(std::string_view s);

struct EpisodeRecord {
  int episode = 0;
  double total_reward = 0.0;
  double total_cost = 0.0;
  std::int64_t cleanings = 0;
  double smoothed_reward = 0.0;  // trailing mean over the last `smoothing_window` episodes
};

struct TrainOptions {
  int episodes = 100;
  int smoothing_window = 20;
  PPOConfig ppo;
  SACConfig sac;
  /// Called after each episode (progress reporting).
  std::function<void(const EpisodeRecord&)> on_episode;
};

struct TrainResult {
  std::vector<EpisodeRecord> curve;
  DenseNet best_actor;  // snapshot at the best smoothed training reward
  DenseNet final_actor;
  int best_episode = 0;
  double best_smoothed_reward = 0.0;
  std::int64_t gradient_steps = 0;
};

/// Trains on `config`; episode e uses replication_seed(training_seed(config), e)
/// for weather. Throws ConfigError when episodes < 1 and NumericError on
/// non-finite losses.
TrainResult train(AgentKind kind, const ScenarioConfig& config, const TrainOptions& options);

/// Trailing moving average with the given window.
std::vector<double> smooth(std::span<const double> values, int window);

}  // namespace soilrl
