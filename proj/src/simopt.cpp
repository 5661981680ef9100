#include "soilrl/simopt.hpp"

#include <cmath>
#include <memory>

#include "soilrl/env.hpp"
#include "soilrl/errors.hpp"
#include "soilrl/parallel.hpp"
#include "soilrl/rng.hpp"

namespace soilrl {
namespace {

std::shared_ptr<const MonthlyWeatherModel> shared_model(const ScenarioConfig& cfg) {
  if (cfg.weather_model_path.empty())
    return std::shared_ptr<const MonthlyWeatherModel>(&MonthlyWeatherModel::abu_dhabi(),
                                                      [](const MonthlyWeatherModel*) {});
  return std::make_shared<const MonthlyWeatherModel>(load_weather_model(cfg.weather_model_path));
}

// Fixed-interval episode without the std::function indirection of run_episode.
void run_fixed_interval(SoilingEnv& env, int z, std::uint64_t seed, double& cost, double& cleanings) {
  env.reset(seed);
  while (!env.done()) env.step(env.state().days_since_clean >= z ? kClean : kNoClean);
  cost = env.state().cumulative_cost;
  cleanings = static_cast<double>(env.state().cumulative_cleanings);
}

IntervalEvaluation summarize(int z, std::vector<double> costs, const std::vector<double>& cleanings) {
  IntervalEvaluation ev;
  ev.z = z;
  const double n = static_cast<double>(costs.size());
  double sum = 0.0, cl = 0.0;
  for (std::size_t i = 0; i < costs.size(); ++i) {
    sum += costs[i];
    cl += cleanings[i];
  }
  ev.mean_total_cost = sum / n;
  ev.mean_cleanings = cl / n;
  double ss = 0.0;
  for (double c : costs) ss += (c - ev.mean_total_cost) * (c - ev.mean_total_cost);
  ev.stderr_total_cost = costs.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  ev.replication_costs = std::move(costs);
  return ev;
}

}  // namespace

const IntervalEvaluation& SimOptResult::best() const {
  for (const auto& e : curve)
    if (e.z == z_star) return e;
  throw StateError("z_star not on the curve");
}

std::uint64_t replication_seed(std::uint64_t base_seed, int replication) {
  return derive_seed(base_seed, static_cast<std::uint64_t>(replication));
}

IntervalEvaluation evaluate_interval(int z, const ScenarioConfig& config, int replications, unsigned threads) {
  if (z < 1) throw ConfigError("cleaning interval must be at least 1 day");
  if (replications < 1) throw ConfigError("replications must be positive");
  const auto model = shared_model(config);
  std::vector<double> costs(replications), cleanings(replications);
  parallel_for(static_cast<std::size_t>(replications), threads, [&](std::size_t r) {
    SoilingEnv env(config, model);
    run_fixed_interval(env, z, replication_seed(config.seed, static_cast<int>(r)), costs[r], cleanings[r]);
  });
  return summarize(z, std::move(costs), cleanings);
}

SimOptResult optimize(const ScenarioConfig& config, int z_min, int z_max, int replications, unsigned threads) {
  if (z_min < 1 || z_min > z_max) throw ConfigError("need 1 <= z_min <= z_max");
  if (replications < 1) throw ConfigError("replications must be positive");
  const auto model = shared_model(config);
  const std::size_t nz = static_cast<std::size_t>(z_max - z_min + 1);
  const std::size_t nr = static_cast<std::size_t>(replications);
  std::vector<double> costs(nz * nr), cleanings(nz * nr);
  parallel_for(nz * nr, threads, [&](std::size_t job) {
    const std::size_t zi = job / nr, r = job % nr;
    SoilingEnv env(config, model);
    run_fixed_interval(env, z_min + static_cast<int>(zi), replication_seed(config.seed, static_cast<int>(r)),
                       costs[job], cleanings[job]);
  });

  SimOptResult result;
  result.curve.reserve(nz);
  for (std::size_t zi = 0; zi < nz; ++zi) {
    std::vector<double> c(costs.begin() + zi * nr, costs.begin() + (zi + 1) * nr);
    std::vector<double> k(cleanings.begin() + zi * nr, cleanings.begin() + (zi + 1) * nr);
    result.curve.push_back(summarize(z_min + static_cast<int>(zi), std::move(c), k));
  }
  const IntervalEvaluation* best = &result.curve.front();
  for (const auto& e : result.curve)
    if (e.mean_total_cost < best->mean_total_cost) best = &e;
  result.z_star = best->z;
  return result;
}

}  // namespace soilrl
