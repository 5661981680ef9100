#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "soilrl/env.hpp"
#include "soilrl/errors.hpp"
#include "soilrl/rng.hpp"

using namespace soilrl;

namespace {

ScenarioConfig short_cfg(int years = 1) {
  ScenarioConfig c = preset("S1exp");
  c.horizon_years = years;
  return c;
}

// No irradiance, so soiling costs nothing.
WeatherDay dark_day(std::int64_t, int) { return {25.0, 0.0, 0.0, 0.0, 50.0}; }

std::vector<int> random_actions(std::size_t n, std::uint64_t seed) {
  RandomStream s(seed, 0);
  std::vector<int> a(n);
  for (int& x : a) x = s.uniform() < 0.1 ? kClean : kNoClean;
  return a;
}

}  // namespace

TEST(Env, FreshResetHasZeroDeposition) {
  SoilingEnv env(short_cfg());
  const auto obs = env.reset(3);
  EXPECT_EQ(obs[0], 0.0);
  EXPECT_EQ(obs[1], 0.0);
  EXPECT_EQ(obs.size, 6u);
}

TEST(Env, SameSeedSameObservations) {
  SoilingEnv a(short_cfg()), b(short_cfg());
  const auto x = a.reset(17), y = b.reset(17);
  EXPECT_EQ(x.values, y.values);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.step(i % 9 == 0).observation.values, b.step(i % 9 == 0).observation.values);
}

TEST(Env, TwentyYearsIs7300Steps) {
  ScenarioConfig c = preset("S1exp");
  c.horizon_years = 20;
  SoilingEnv env(c);
  env.reset(1);
  int steps = 0;
  while (!env.done()) {
    env.step(kNoClean);
    ++steps;
  }
  EXPECT_EQ(steps, 7300);
  EXPECT_THROW(env.step(kNoClean), StateError);
}

TEST(Env, StepBeforeResetAndBadAction) {
  SoilingEnv env(short_cfg());
  EXPECT_THROW(env.step(kNoClean), StateError);
  env.reset(1);
  EXPECT_THROW(env.step(2), StateError);
}

TEST(Env, CleanChargesCostAndResetsDeposition) {
  SoilingEnv env(short_cfg());
  env.reset(5);
  for (int i = 0; i < 30; ++i) env.step(kNoClean);
  const double before = env.state().soiling;
  ASSERT_GT(before, 0.05);
  const auto r = env.step(kClean);
  EXPECT_EQ(r.info.cleaning_cost_incurred, env.config().cleaning_cost);
  // Only the day's fresh deposit (or the residue floor) remains.
  const double w = r.info.weather.wind_speed, pm = r.info.weather.particulate_matter;
  const double fresh = std::max(0.00144 * (10.6 - 4.99 * w + 247.0 * pm - 73.4 * w * pm), 0.0);
  EXPECT_NEAR(r.info.soiling, std::max(fresh, env.config().soiling.beta_residue), 1e-12);
  EXPECT_EQ(env.state().days_since_clean, 1);
}

TEST(Env, NoLossWithoutIrradiance) {
  SoilingEnv env(short_cfg());
  env.set_weather_override(dark_day);
  env.reset(1);
  const auto r = env.step(kClean);
  EXPECT_EQ(r.info.energy_loss_cost, 0.0);
}

TEST(Env, ForcedZeroLossCostsEqualCleanings) {
  SoilingEnv env(short_cfg());
  env.set_weather_override(dark_day);
  const auto actions = random_actions(365, 2);
  std::size_t i = 0;
  const auto sum = run_episode(env, 1, [&](const Observation&, const EnvState&) { return actions[i++]; });
  std::int64_t n = 0;
  for (int a : actions) n += a;
  EXPECT_EQ(sum.cleanings, n);
  EXPECT_NEAR(sum.total_cost, static_cast<double>(n) * env.config().cleaning_cost, 1e-12);
  EXPECT_EQ(sum.energy_loss, 0.0);
}

TEST(Env, NeverCleanNoLossIsZero) {
  SoilingEnv env(short_cfg());
  env.set_weather_override(dark_day);
  const auto sum = run_episode(env, 1, [](const Observation&, const EnvState&) { return kNoClean; });
  EXPECT_EQ(sum.total_cost, 0.0);
}

TEST(Env, CumulativeCostEqualsSumOfStepCosts) {
  SoilingEnv env(short_cfg(3));
  const auto actions = random_actions(3 * 365, 4);
  std::vector<StepInfo> trace;
  std::size_t i = 0;
  run_episode(
      env, 8, [&](const Observation&, const EnvState&) { return actions[i++]; },
      [&](const Observation&, int, const StepResult& r) { trace.push_back(r.info); });
  EXPECT_NEAR(total_cost(trace), env.state().cumulative_cost, 1e-9 * env.state().cumulative_cost);
}

TEST(Env, PerStepRewardsSumToTerminalReward) {
  ScenarioConfig per = short_cfg(2), term = short_cfg(2);
  term.reward_mode = RewardMode::kTerminal;
  SoilingEnv a(per), b(term);
  const auto actions = random_actions(730, 6);
  std::size_t i = 0, j = 0;
  double nonzero_terminal = 0;
  const auto sa = run_episode(a, 9, [&](const Observation&, const EnvState&) { return actions[i++]; });
  const auto sb = run_episode(
      b, 9, [&](const Observation&, const EnvState&) { return actions[j++]; },
      [&](const Observation&, int, const StepResult& r) {
        if (!r.done) nonzero_terminal += std::fabs(r.reward);
      });
  EXPECT_EQ(nonzero_terminal, 0.0);
  EXPECT_NEAR(sa.total_reward, sb.total_reward, 1e-9 * std::fabs(sa.total_reward));
  EXPECT_NEAR(sa.total_reward, -sa.total_cost, 1e-9 * sa.total_cost);
}

TEST(Env, DailyCleaningNeverLosesMoreEnergyThanNeverCleaning) {
  SoilingEnv a(short_cfg(2)), b(short_cfg(2));
  std::vector<double> always, never;
  run_episode(
      a, 3, [](const Observation&, const EnvState&) { return kClean; },
      [&](const Observation&, int, const StepResult& r) { always.push_back(r.info.energy_loss_cost); });
  run_episode(
      b, 3, [](const Observation&, const EnvState&) { return kNoClean; },
      [&](const Observation&, int, const StepResult& r) { never.push_back(r.info.energy_loss_cost); });
  ASSERT_EQ(always.size(), never.size());
  for (std::size_t d = 0; d < always.size(); ++d) ASSERT_LE(always[d], never[d] + 1e-15) << d;
}

TEST(Env, ObservationNormalization) {
  ScenarioConfig c = short_cfg();
  c.include_humidity = true;
  SoilingEnv scaled(c);
  c.normalization_mode = NormalizationMode::kPaperDiv10;
  SoilingEnv div10(c);
  const auto x = scaled.reset(2), y = div10.reset(2);
  ASSERT_EQ(x.size, 7u);
  const auto& w = scaled.state().today;
  EXPECT_DOUBLE_EQ(x[5], w.irradiance / 9000.0);
  EXPECT_DOUBLE_EQ(y[5], w.irradiance / 10.0);
  EXPECT_DOUBLE_EQ(x[6], w.relative_humidity / 100.0);
  EXPECT_DOUBLE_EQ(x[3], w.wind_speed / 30.0);
}

TEST(Env, DegradationStepsYearly) {
  SoilingEnv env(short_cfg(2));
  env.set_weather_override([](std::int64_t, int) { return WeatherDay{25.0, 0.0, 0.0, 5000.0, 50.0}; });
  env.reset(1);
  double eff_first = 0, eff_last_y0 = 0, eff_first_y1 = 0;
  for (int d = 0; d < 366; ++d) {
    const auto r = env.step(kClean);
    if (d == 0) eff_first = r.info.efficiency;
    if (d == 364) eff_last_y0 = r.info.efficiency;
    if (d == 365) eff_first_y1 = r.info.efficiency;
  }
  EXPECT_DOUBLE_EQ(eff_first, eff_last_y0);
  EXPECT_NEAR(eff_first_y1 / eff_first, 0.95, 1e-12);
}
