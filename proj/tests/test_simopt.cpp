#include <gtest/gtest.h>

#include "soilrl/errors.hpp"
#include "soilrl/simopt.hpp"

using namespace soilrl;

namespace {
ScenarioConfig cfg_years(const char* name, int years) {
  ScenarioConfig c = preset(name);
  c.horizon_years = years;
  return c;
}
}  // namespace

TEST(EvaluateInterval, DailyCleaningCleansEveryDay) {
  const auto e = evaluate_interval(1, preset("S1exp"), 2);
  EXPECT_EQ(e.mean_cleanings, 7299.0);  // day 0 starts clean
}

TEST(EvaluateInterval, IntervalLongerThanHorizonNeverCleans) {
  EXPECT_EQ(evaluate_interval(7300, cfg_years("S1exp", 20), 1).mean_cleanings, 0.0);
}

TEST(EvaluateInterval, Z19CleansAbout384TimesIn20Years) {
  const auto e = evaluate_interval(19, preset("S1exp"), 2);
  EXPECT_EQ(e.mean_cleanings, 384.0);
}

TEST(EvaluateInterval, CleaningEveryZDays) {
  const auto c = cfg_years("S3exp", 1);
  for (int z : {2, 5, 30, 100}) EXPECT_EQ(evaluate_interval(z, c, 1).mean_cleanings, 364 / z) << z;
}

TEST(EvaluateInterval, Errors) {
  EXPECT_THROW(evaluate_interval(0, preset("S1exp"), 1), ConfigError);
  EXPECT_THROW(evaluate_interval(3, preset("S1exp"), 0), ConfigError);
  EXPECT_THROW(optimize(preset("S1exp"), 10, 5, 1), ConfigError);
}

TEST(Optimize, CurveIsReproducible) {
  const auto c = cfg_years("S2exp", 2);
  const auto a = optimize(c, 1, 40, 4), b = optimize(c, 1, 40, 4, 1);
  ASSERT_EQ(a.curve.size(), 40u);
  for (std::size_t i = 0; i < a.curve.size(); ++i)
    ASSERT_EQ(a.curve[i].replication_costs, b.curve[i].replication_costs);
  EXPECT_EQ(a.z_star, b.z_star);
}

TEST(Optimize, FreeCleaningMeansDailyCleaning) {
  auto c = cfg_years("S1exp", 2);
  c.cleaning_cost = 0.0;
  EXPECT_EQ(optimize(c, 1, 60, 3).z_star, 1);
}

TEST(Optimize, ZeroTariffMinimizesCleanings) {
  auto c = cfg_years("S1exp", 2);
  c.tariff = 0.0;
  const auto r = optimize(c, 1, 120, 2);
  // Only cleanings cost money: the optimum reaches the fewest cleanings on
  // the curve, the value z_max attains; ties go to the smaller z.
  const double min_cleanings = r.curve.back().mean_cleanings;
  EXPECT_EQ(r.best().mean_cleanings, min_cleanings);
  EXPECT_EQ(r.best().mean_total_cost, r.curve.back().mean_total_cost);
  for (const auto& e : r.curve)
    if (e.z < r.z_star) EXPECT_GT(e.mean_cleanings, min_cleanings);
}

TEST(Optimize, CurveIsUShapedForExpatTariff) {
  for (const char* name : {"S1exp", "S3exp", "S5exp"}) {
    const auto r = optimize(cfg_years(name, 5), 1, 120, 10);
    EXPECT_GT(r.curve.front().mean_total_cost, r.best().mean_total_cost) << name;
    EXPECT_GT(r.curve.back().mean_total_cost, r.best().mean_total_cost) << name;
  }
}

TEST(Optimize, ZStarRespondsToCostAndTariff) {
  const auto lo = optimize(cfg_years("S1exp", 5), 1, 120, 10).z_star;
  const auto hi = optimize(cfg_years("S5exp", 5), 1, 120, 10).z_star;
  const auto uae = optimize(cfg_years("S1uae", 5), 1, 120, 10).z_star;
  EXPECT_LE(lo, hi);
  EXPECT_GE(uae, lo);
}
