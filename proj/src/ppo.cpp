#include <algorithm>
#include <cmath>
#include <numeric>

#include "soilrl/agents.hpp"
#include "soilrl/errors.hpp"
#include "soilrl/gae.hpp"

namespace soilrl {

void PPOConfig::validate() const {
  if (!(clip_epsilon > 0.0 && clip_epsilon < 1.0)) throw ConfigError("clip_epsilon must lie in (0, 1)");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in (0, 1]");
  if (!(gae_lambda >= 0.0 && gae_lambda <= 1.0)) throw ConfigError("gae_lambda must lie in [0, 1]");
  if (learning_epochs < 1) throw ConfigError("learning_epochs must be positive");
  if (minibatch_size < 1) throw ConfigError("minibatch_size must be positive");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
}

double ppo_surrogate(double ratio, double advantage, double eps) {
  const double clipped = std::clamp(ratio, 1.0 - eps, 1.0 + eps);
  return std::min(ratio * advantage, clipped * advantage);
}

double ppo_surrogate_grad(double ratio, double advantage, double eps) {
  // The clipped branch is constant in the ratio; it is the minimum exactly
  // when the ratio has moved past the clip edge in the advantage's direction.
  if (advantage > 0.0 && ratio > 1.0 + eps) return 0.0;
  if (advantage < 0.0 && ratio < 1.0 - eps) return 0.0;
  return advantage;
}

PPOAgent::PPOAgent(std::size_t obs_dim, PPOConfig config, std::uint64_t seed)
    : cfg_(config),
      actor_({{obs_dim, config.hidden, Activation::kRelu}, {config.hidden, 2, Activation::kSoftmax}},
             derive_seed(seed, 1)),
      critic_({{obs_dim, config.hidden, Activation::kRelu}, {config.hidden, 1, Activation::kLinear}},
              derive_seed(seed, 2)),
      actor_opt_(actor_.parameter_count(), config.learning_rate),
      critic_opt_(critic_.parameter_count(), config.learning_rate),
      shuffle_(seed, 3),
      act_input_(1, obs_dim) {
  cfg_.validate();
}

int PPOAgent::act(const Observation& obs, RandomStream& stream, double& log_prob, double& value) {
  std::copy(obs.view().begin(), obs.view().end(), act_input_.data.begin());
  actor_.forward(act_input_, act_cache_);
  double logp[2];
  log_softmax(act_cache_.logits().row(0), logp);
  const double p_clean = act_cache_.output()(0, kClean);
  const int a = stream.uniform() < p_clean ? kClean : kNoClean;
  log_prob = logp[a];
  critic_.forward(act_input_, act_cache_);
  value = act_cache_.output()(0, 0);
  return a;
}

PPOUpdateStats PPOAgent::update(const Rollout& ro) {
  const std::size_t n = ro.size();
  if (n == 0) return {};
  if (ro.observations.rows != n || ro.log_probs.size() != n || ro.values.size() != n || ro.rewards.size() != n)
    throw std::invalid_argument("rollout fields have inconsistent lengths");

  GaeResult gae = compute_gae(ro.rewards, ro.values, ro.dones, 0.0, cfg_.gamma, cfg_.gae_lambda);
  std::vector<double> adv = gae.advantages;
  normalize_advantages(adv);

  const std::size_t obs_dim = ro.observations.cols;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  std::vector<double> actor_grad(actor_.parameter_count());
  std::vector<double> critic_grad(critic_.parameter_count());
  ForwardCache actor_cache, critic_cache;
  Matrix mb_obs, actor_up, critic_up;

  PPOUpdateStats stats;
  double clipped = 0.0, samples = 0.0;
  for (int epoch = 0; epoch < cfg_.learning_epochs; ++epoch) {
    for (std::size_t i = n - 1; i > 0; --i) {
      const std::size_t j = static_cast<std::size_t>(shuffle_.next_u64() % (i + 1));
      std::swap(order[i], order[j]);
    }
    for (std::size_t start = 0; start < n; start += cfg_.minibatch_size) {
      const std::size_t b = std::min(cfg_.minibatch_size, n - start);
      mb_obs.resize(b, obs_dim);
      for (std::size_t k = 0; k < b; ++k) {
        const auto src = ro.observations.row(order[start + k]);
        std::copy(src.begin(), src.end(), mb_obs.row(k).begin());
      }

      // Actor: ascend the clipped surrogate (descend its negative).
      actor_.forward(mb_obs, actor_cache);
      actor_up.resize(b, 2);
      double policy_loss = 0.0;
      for (std::size_t k = 0; k < b; ++k) {
        const std::size_t t = order[start + k];
        const int a = ro.actions[t];
        double logp[2];
        log_softmax(actor_cache.logits().row(k), logp);
        const double ratio = std::exp(logp[a] - ro.log_probs[t]);
        const double A = adv[t];
        policy_loss -= ppo_surrogate(ratio, A, cfg_.clip_epsilon);
        stats.approx_kl += ro.log_probs[t] - logp[a];
        if (std::fabs(ratio - 1.0) > cfg_.clip_epsilon) clipped += 1.0;
        samples += 1.0;

        // d(-surrogate)/d logits = -g * ratio * (onehot(a) - p)
        const double g = ppo_surrogate_grad(ratio, A, cfg_.clip_epsilon);
        const auto p = actor_cache.output().row(k);
        for (int j = 0; j < 2; ++j) {
          double d = -g * ratio * ((j == a ? 1.0 : 0.0) - p[j]);
          if (cfg_.entropy_coefficient != 0.0) {
            // d(-c H)/dz_j = c p_j (log p_j + H)
            const double H = -(p[0] * logp[0] + p[1] * logp[1]);
            d += cfg_.entropy_coefficient * p[j] * (logp[j] + H);
          }
          actor_up(k, j) = d / static_cast<double>(b);
        }
      }
      policy_loss /= static_cast<double>(b);
      std::fill(actor_grad.begin(), actor_grad.end(), 0.0);
      actor_.backward(actor_cache, actor_up, OutputGrad::kPreActivation, actor_grad);
      clip_global_norm(actor_grad, cfg_.max_grad_norm);

      // Critic: mean squared error to the GAE value targets.
      critic_.forward(mb_obs, critic_cache);
      critic_up.resize(b, 1);
      double value_loss = 0.0;
      for (std::size_t k = 0; k < b; ++k) {
        const double err = critic_cache.output()(k, 0) - gae.value_targets[order[start + k]];
        value_loss += err * err;
        critic_up(k, 0) = cfg_.value_loss_coefficient * 2.0 * err / static_cast<double>(b);
      }
      value_loss /= static_cast<double>(b);
      std::fill(critic_grad.begin(), critic_grad.end(), 0.0);
      critic_.backward(critic_cache, critic_up, OutputGrad::kPostActivation, critic_grad);
      clip_global_norm(critic_grad, cfg_.max_grad_norm);

      if (!std::isfinite(policy_loss) || !std::isfinite(value_loss) || !all_finite(actor_grad) ||
          !all_finite(critic_grad))
        throw NumericError("PPO update produced a non-finite loss (policy " + std::to_string(policy_loss) +
                           ", value " + std::to_string(value_loss) + ")");

      actor_opt_.step(actor_.parameters(), actor_grad);
      critic_opt_.step(critic_.parameters(), critic_grad);

      stats.policy_loss += policy_loss;
      stats.value_loss += value_loss;
      ++stats.minibatches;
    }
  }
  if (stats.minibatches > 0) {
    stats.policy_loss /= stats.minibatches;
    stats.value_loss /= stats.minibatches;
  }
  stats.clip_fraction = samples > 0 ? clipped / samples : 0.0;
  stats.approx_kl = samples > 0 ? stats.approx_kl / samples : 0.0;
  return stats;
}

}  // namespace soilrl
