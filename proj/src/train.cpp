#include <algorithm>
#include <cmath>

#include "soilrl/agents.hpp"
#include "soilrl/errors.hpp"
#include "soilrl/simopt.hpp"

namespace soilrl {

std::string_view to_string(AgentKind k) { return k == AgentKind::kPPO ? "ppo" : "sac"; }

AgentKind parse_agent_kind(std::string_view s) {
  if (s == "ppo") return AgentKind::kPPO;
  if (s == "sac") return AgentKind::kSAC;
  throw ConfigError("unknown agent '" + std::string(s) + "' (expected ppo or sac)");
}

std::vector<double> smooth(std::span<const double> values, int window) {
  if (window < 1) throw std::invalid_argument("smoothing window must be positive");
  std::vector<double> out(values.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    sum += values[i];
    if (i >= static_cast<std::size_t>(window)) sum -= values[i - window];
    out[i] = sum / static_cast<double>(std::min<std::size_t>(i + 1, window));
  }
  return out;
}

namespace {

constexpr std::uint32_t kBehaviourStream = 7;
constexpr std::uint32_t kReplayStream = 8;
constexpr std::uint64_t kAgentSalt = 0xA6E7;

struct Tracker {
  const TrainOptions& opt;
  TrainResult& result;
  std::vector<double> rewards;
  double window_sum = 0.0;

  // Returns true when this episode sets a new best smoothed reward.
  bool record(int episode, const EpisodeSummary& s) {
    rewards.push_back(s.total_reward);
    window_sum += s.total_reward;
    const std::size_t n = rewards.size();
    if (n > static_cast<std::size_t>(opt.smoothing_window)) window_sum -= rewards[n - 1 - opt.smoothing_window];
    EpisodeRecord rec{episode, s.total_reward, s.total_cost, s.cleanings,
                      window_sum / static_cast<double>(std::min<std::size_t>(n, opt.smoothing_window))};
    result.curve.push_back(rec);
    if (opt.on_episode) opt.on_episode(rec);
    if (n == 1 || rec.smoothed_reward > result.best_smoothed_reward) {
      result.best_smoothed_reward = rec.smoothed_reward;
      result.best_episode = episode;
      return true;
    }
    return false;
  }
};

void train_ppo(const ScenarioConfig& cfg, const TrainOptions& opt, TrainResult& result) {
  SoilingEnv env(cfg);
  const std::uint64_t base = training_seed(cfg);
  PPOAgent agent(env.observation_size(), opt.ppo, derive_seed(base, kAgentSalt));
  RandomStream behaviour(base, kBehaviourStream);
  Tracker tracker{opt, result, {}, 0.0};

  Rollout ro;
  for (int e = 0; e < opt.episodes; ++e) {
    const std::size_t T = static_cast<std::size_t>(cfg.horizon_days());
    ro.observations.resize(T, env.observation_size());
    ro.actions.clear();
    ro.log_probs.clear();
    ro.values.clear();
    ro.rewards.clear();
    ro.dones.clear();
    std::size_t t = 0;
    const auto summary = run_episode(
        env, replication_seed(base, e),
        [&](const Observation& obs, const EnvState&) {
          double logp = 0.0, value = 0.0;
          const int a = agent.act(obs, behaviour, logp, value);
          std::copy(obs.view().begin(), obs.view().end(), ro.observations.row(t).begin());
          ro.actions.push_back(a);
          ro.log_probs.push_back(logp);
          ro.values.push_back(value);
          return a;
        },
        [&](const Observation&, int, const StepResult& r) {
          ro.rewards.push_back(r.reward);
          ro.dones.push_back(r.done ? 1 : 0);
          ++t;
        });
    const auto stats = agent.update(ro);
    result.gradient_steps += stats.minibatches;
    if (tracker.record(e, summary)) result.best_actor = agent.actor();
  }
  result.final_actor = agent.actor();
}

void train_sac(const ScenarioConfig& cfg, const TrainOptions& opt, TrainResult& result) {
  SoilingEnv env(cfg);
  const std::uint64_t base = training_seed(cfg);
  SACAgent agent(env.observation_size(), opt.sac, derive_seed(base, kAgentSalt));
  ReplayBuffer buffer(opt.sac.replay_capacity, env.observation_size());
  RandomStream behaviour(base, kBehaviourStream);
  RandomStream replay(base, kReplayStream);
  Tracker tracker{opt, result, {}, 0.0};
  std::int64_t env_steps = 0;

  for (int e = 0; e < opt.episodes; ++e) {
    const auto summary = run_episode(
        env, replication_seed(base, e), [&](const Observation& obs, const EnvState&) { return agent.act(obs, behaviour); },
        [&](const Observation& obs, int a, const StepResult& r) {
          buffer.add({obs, a, r.reward, r.observation, r.done});
          ++env_steps;
          if (env_steps > opt.sac.warmup_steps && buffer.size() >= opt.sac.batch_size &&
              env_steps % opt.sac.update_interval == 0) {
            agent.update(buffer.sample(opt.sac.batch_size, replay));
            ++result.gradient_steps;
          }
        });
    if (tracker.record(e, summary)) result.best_actor = agent.policy();
  }
  result.final_actor = agent.policy();
}

}  // namespace

TrainResult train(AgentKind kind, const ScenarioConfig& config, const TrainOptions& options) {
  if (options.episodes < 1) throw ConfigError("training needs at least one episode");
  if (options.smoothing_window < 1) throw ConfigError("smoothing window must be positive");
  config.validate();
  TrainResult result;
  if (kind == AgentKind::kPPO) {
    options.ppo.validate();
    train_ppo(config, options, result);
  } else {
    options.sac.validate();
    train_sac(config, options, result);
  }
  return result;
}

}  // namespace soilrl
