#include <algorithm>
#include <cmath>

#include "soilrl/agents.hpp"
#include "soilrl/errors.hpp"

namespace soilrl {

void SACConfig::validate() const {
  if (!(target_update_rate > 0.0 && target_update_rate <= 1.0))
    throw ConfigError("target_update_rate must lie in (0, 1]");
  if (replay_capacity < batch_size) throw ConfigError("replay_capacity must be at least batch_size");
  if (batch_size < 1) throw ConfigError("batch_size must be positive");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in (0, 1]");
  if (!(entropy_alpha >= 0.0)) throw ConfigError("entropy_alpha must be non-negative");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  if (warmup_steps < 0) throw ConfigError("warmup_steps must be non-negative");
  if (update_interval < 1) throw ConfigError("update_interval must be positive");
}

ReplayBuffer::ReplayBuffer(std::size_t capacity, std::size_t obs_dim)
    : capacity_(capacity),
      obs_dim_(obs_dim),
      obs_(capacity * obs_dim),
      next_obs_(capacity * obs_dim),
      actions_(capacity),
      rewards_(capacity),
      dones_(capacity) {
  if (capacity == 0) throw std::invalid_argument("replay capacity must be positive");
}

void ReplayBuffer::add(const Transition& t) {
  if (t.observation.size != obs_dim_ || t.next_observation.size != obs_dim_)
    throw std::invalid_argument("transition observation size does not match the buffer");
  if (t.action != kNoClean && t.action != kClean) throw std::invalid_argument("action must be 0 or 1");
  std::copy_n(t.observation.values.begin(), obs_dim_, obs_.begin() + head_ * obs_dim_);
  std::copy_n(t.next_observation.values.begin(), obs_dim_, next_obs_.begin() + head_ * obs_dim_);
  actions_[head_] = t.action;
  rewards_[head_] = t.reward;
  dones_[head_] = t.done ? 1.0 : 0.0;
  head_ = (head_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
}

ReplayBuffer::Batch ReplayBuffer::sample(std::size_t batch_size, RandomStream& stream) const {
  if (size_ == 0) throw StateError("cannot sample from an empty replay buffer");
  Batch b;
  b.observations.resize(batch_size, obs_dim_);
  b.next_observations.resize(batch_size, obs_dim_);
  b.actions.resize(batch_size);
  b.rewards.resize(batch_size);
  b.dones.resize(batch_size);
  for (std::size_t k = 0; k < batch_size; ++k) {
    const std::size_t i = static_cast<std::size_t>(stream.next_u64() % size_);
    std::copy_n(obs_.begin() + i * obs_dim_, obs_dim_, b.observations.row(k).begin());
    std::copy_n(next_obs_.begin() + i * obs_dim_, obs_dim_, b.next_observations.row(k).begin());
    b.actions[k] = actions_[i];
    b.rewards[k] = rewards_[i];
    b.dones[k] = dones_[i];
  }
  return b;
}

double entropy_bonus(std::span<const double> probs, double alpha) {
  double h = 0.0;
  for (double p : probs)
    if (p > 0.0) h -= p * std::log(p);
  return alpha * h;
}

double soft_state_value(std::span<const double> probs, std::span<const double> log_probs,
                        std::span<const double> q, double alpha) {
  double v = 0.0;
  for (std::size_t a = 0; a < probs.size(); ++a) v += probs[a] * (q[a] - alpha * log_probs[a]);
  return v;
}

double soft_q_target(double reward, bool done, double gamma, double next_soft_value) {
  return done ? reward : reward + gamma * next_soft_value;
}

namespace {

std::vector<LayerSpec> two_hidden(std::size_t in, std::size_t h, std::size_t out, Activation head) {
  return {{in, h, Activation::kRelu}, {h, h, Activation::kRelu}, {h, out, head}};
}

// Rows of `obs` with a one-hot action appended.
void with_action(const Matrix& obs, std::span<const int> actions, Matrix& out) {
  out.resize(obs.rows, obs.cols + 2);
  for (std::size_t r = 0; r < obs.rows; ++r) {
    auto dst = out.row(r);
    std::copy(obs.row(r).begin(), obs.row(r).end(), dst.begin());
    dst[obs.cols + static_cast<std::size_t>(actions[r])] = 1.0;
  }
}

}  // namespace

SACAgent::SACAgent(std::size_t obs_dim, SACConfig config, std::uint64_t seed)
    : cfg_(config),
      obs_dim_(obs_dim),
      policy_(two_hidden(obs_dim, config.hidden, 2, Activation::kSoftmax), derive_seed(seed, 1)),
      q1_(two_hidden(obs_dim + 2, config.hidden, 1, Activation::kLinear), derive_seed(seed, 2)),
      q2_(two_hidden(obs_dim + 2, config.hidden, 1, Activation::kLinear), derive_seed(seed, 3)),
      q1_target_(q1_),
      q2_target_(q2_),
      policy_opt_(policy_.parameter_count(), config.learning_rate),
      q1_opt_(q1_.parameter_count(), config.learning_rate),
      q2_opt_(q2_.parameter_count(), config.learning_rate) {
  cfg_.validate();
}

int SACAgent::act(const Observation& obs, RandomStream& stream) const {
  const auto p = policy_.forward(obs.view());
  return stream.uniform() < p[kClean] ? kClean : kNoClean;
}

Matrix SACAgent::q_both(const DenseNet& q, const Matrix& obs) const {
  const std::size_t n = obs.rows;
  Matrix in(2 * n, obs_dim_ + 2);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t a = 0; a < 2; ++a) {
      auto dst = in.row(2 * r + a);
      std::copy(obs.row(r).begin(), obs.row(r).end(), dst.begin());
      dst[obs_dim_ + a] = 1.0;
    }
  ForwardCache cache;
  q.forward(in, cache);
  Matrix out(n, 2);
  out.data = cache.output().data;
  return out;
}

SACUpdateStats SACAgent::update(const ReplayBuffer::Batch& batch) {
  const std::size_t n = batch.observations.rows;
  if (n == 0) return {};
  const double alpha = cfg_.entropy_alpha;
  const double inv_n = 1.0 / static_cast<double>(n);
  SACUpdateStats stats;

  // Soft targets from the target critics under the current policy.
  std::vector<double> y(n);
  {
    ForwardCache pc;
    policy_.forward(batch.next_observations, pc);
    const Matrix qa = q_both(q1_target_, batch.next_observations);
    const Matrix qb = q_both(q2_target_, batch.next_observations);
    for (std::size_t k = 0; k < n; ++k) {
      double logp[2];
      log_softmax(pc.logits().row(k), logp);
      const double qmin[2] = {std::min(qa(k, 0), qb(k, 0)), std::min(qa(k, 1), qb(k, 1))};
      const double v = soft_state_value(pc.output().row(k), logp, qmin, alpha);
      y[k] = soft_q_target(batch.rewards[k], batch.dones[k] > 0.5, cfg_.gamma, v);
    }
  }

  Matrix sa;
  with_action(batch.observations, batch.actions, sa);
  auto regress = [&](DenseNet& q, AdamOptimizer& opt) {
    ForwardCache c;
    q.forward(sa, c);
    Matrix up(n, 1);
    double loss = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double err = c.output()(k, 0) - y[k];
      loss += err * err;
      up(k, 0) = 2.0 * err * inv_n;
    }
    std::vector<double> g(q.parameter_count());
    q.backward(c, up, OutputGrad::kPostActivation, g);
    loss *= inv_n;
    if (!std::isfinite(loss) || !all_finite(g))
      throw NumericError("SAC critic update produced a non-finite loss (" + std::to_string(loss) + ")");
    opt.step(q.parameters(), g);
    return loss;
  };
  stats.q1_loss = regress(q1_, q1_opt_);
  stats.q2_loss = regress(q2_, q2_opt_);

  // Policy: minimise sum_a p(a) [alpha log p(a) - min Q(s, a)].
  {
    ForwardCache pc;
    policy_.forward(batch.observations, pc);
    const Matrix qa = q_both(q1_, batch.observations);
    const Matrix qb = q_both(q2_, batch.observations);
    Matrix up(n, 2);
    double loss = 0.0, entropy = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      double logp[2];
      log_softmax(pc.logits().row(k), logp);
      const auto p = pc.output().row(k);
      double g[2], pg = 0.0;
      for (int a = 0; a < 2; ++a) {
        g[a] = alpha * logp[a] - std::min(qa(k, a), qb(k, a));
        pg += p[a] * g[a];
        entropy -= p[a] * logp[a];
      }
      loss += pg;
      for (int a = 0; a < 2; ++a) up(k, a) = p[a] * (g[a] - pg) * inv_n;
    }
    std::vector<double> grads(policy_.parameter_count());
    policy_.backward(pc, up, OutputGrad::kPreActivation, grads);
    stats.policy_loss = loss * inv_n;
    stats.entropy = entropy * inv_n;
    if (!std::isfinite(stats.policy_loss) || !all_finite(grads))
      throw NumericError("SAC policy update produced a non-finite loss (" + std::to_string(stats.policy_loss) + ")");
    policy_opt_.step(policy_.parameters(), grads);
  }

  update_targets(cfg_.target_update_rate);
  return stats;
}

void SACAgent::update_targets(double rate) {
  polyak_update(q1_target_, q1_, rate);
  polyak_update(q2_target_, q2_, rate);
}

}  // namespace soilrl
