#include "soilrl/policy.hpp"

#include <cmath>
#include <sstream>

#include "soilrl/errors.hpp"
#include "soilrl/parallel.hpp"
#include "soilrl/simopt.hpp"
#include "soilrl/text.hpp"

namespace soilrl {
namespace {

constexpr std::uint64_t kEvalSalt = 0xE7A1'0000'0000'0001ULL;
constexpr std::uint64_t kTrainSalt = 0x7EA1'0000'0000'0002ULL;
constexpr std::uint32_t kActionStream = 101;

}  // namespace

FixedIntervalPolicy::FixedIntervalPolicy(int z, NormalizationMode mode)
    : z_(z), scale_(mode == NormalizationMode::kFeatureScaled ? kFeatureScales[1] : 10.0) {
  if (z < 1) throw ConfigError("cleaning interval must be at least 1 day");
}

int FixedIntervalPolicy::act(const Observation& obs) const {
  const auto days = std::llround(obs[1] * scale_);
  return days >= z_ ? kClean : kNoClean;
}

double ActorPolicy::clean_probability(const Observation& obs) const { return actor_.forward(obs.view())[kClean]; }

int ActorPolicy::act(const Observation& obs) const {
  const auto p = actor_.forward(obs.view());
  return p[kClean] > p[kNoClean] ? kClean : kNoClean;
}

int ActorPolicy::sample(const Observation& obs, RandomStream& stream) const {
  return stream.uniform() < clean_probability(obs) ? kClean : kNoClean;
}

std::string format_policy_file(const PolicyFile& pf) {
  std::ostringstream out;
  out << "soilrl-policy 1\n"
      << "agent " << pf.agent << '\n'
      << "normalization_mode " << to_string(pf.normalization_mode) << '\n'
      << "include_humidity " << (pf.include_humidity ? 1 : 0) << '\n'
      << "scenario " << (pf.scenario.empty() ? "-" : pf.scenario) << '\n'
      << "training_episodes " << pf.training_episodes << '\n'
      << "seed " << pf.seed << '\n'
      << format_densenet(pf.actor);
  return out.str();
}

PolicyFile parse_policy_file(std::string_view text) {
  PolicyFile pf;
  std::size_t pos = 0;
  int line = 0;
  auto next_kv = [&](std::string_view key) {
    for (;;) {
      if (pos >= text.size()) throw ParseError("policy file ends before '" + std::string(key) + "'", line, 1);
      const auto end = text.find('\n', pos);
      const auto stop = end == std::string_view::npos ? text.size() : end;
      const auto l = trim(text.substr(pos, stop - pos));
      pos = end == std::string_view::npos ? text.size() : end + 1;
      ++line;
      if (l.empty() || l.front() == '#') continue;
      const auto sp = l.find(' ');
      if (sp == std::string_view::npos || l.substr(0, sp) != key)
        throw ParseError("expected '" + std::string(key) + " <value>'", line, 1);
      return std::string(trim(l.substr(sp + 1)));
    }
  };
  if (next_kv("soilrl-policy") != "1") throw ParseError("unsupported policy file version", line, 1);
  pf.agent = next_kv("agent");
  pf.normalization_mode = parse_normalization_mode(next_kv("normalization_mode"));
  pf.include_humidity = next_kv("include_humidity") == "1";
  pf.scenario = next_kv("scenario");
  pf.training_episodes = std::stoll(next_kv("training_episodes"));
  pf.seed = std::stoull(next_kv("seed"));
  pf.actor = parse_densenet(text, pos);
  const std::size_t expected_in = pf.include_humidity ? 7 : 6;
  if (pf.actor.input_dim() != expected_in || pf.actor.output_dim() != 2 ||
      pf.actor.layers().back().activation != Activation::kSoftmax)
    throw ParseError("policy network must map " + std::to_string(expected_in) + " features to a 2-way softmax");
  return pf;
}

void save_policy_file(const PolicyFile& pf, const std::string& path) { write_text_file(path, format_policy_file(pf)); }

PolicyFile load_policy_file(const std::string& path) { return parse_policy_file(read_text_file(path)); }

std::uint64_t evaluation_seed(const ScenarioConfig& config) { return derive_seed(config.seed, kEvalSalt); }
std::uint64_t training_seed(const ScenarioConfig& config) { return derive_seed(config.seed, kTrainSalt); }

EvaluationResult evaluate(const Policy& policy, const ScenarioConfig& config, int episodes, std::uint64_t base_seed,
                          EvalMode mode, unsigned threads) {
  if (episodes < 1) throw ConfigError("evaluation needs at least one episode");
  EvaluationResult res;
  res.episode_costs.assign(episodes, 0.0);
  res.episode_cleanings.assign(episodes, 0);
  parallel_for(static_cast<std::size_t>(episodes), threads, [&](std::size_t r) {
    SoilingEnv env(config);
    const std::uint64_t seed = replication_seed(base_seed, static_cast<int>(r));
    RandomStream actions(seed, kActionStream);
    Observation obs = env.reset(seed);
    while (!env.done()) {
      const int a = mode == EvalMode::kGreedy ? policy.act(obs) : policy.sample(obs, actions);
      obs = env.step(a).observation;
    }
    res.episode_costs[r] = env.state().cumulative_cost;
    res.episode_cleanings[r] = env.state().cumulative_cleanings;
  });
  const double n = episodes;
  double sum = 0.0, cl = 0.0;
  for (int r = 0; r < episodes; ++r) {
    sum += res.episode_costs[r];
    cl += static_cast<double>(res.episode_cleanings[r]);
  }
  res.mean_total_cost = sum / n;
  res.mean_cleanings = cl / n;
  double ss = 0.0;
  for (double c : res.episode_costs) ss += (c - res.mean_total_cost) * (c - res.mean_total_cost);
  res.stderr_total_cost = episodes > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  return res;
}

}  // namespace soilrl
