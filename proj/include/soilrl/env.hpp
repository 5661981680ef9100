#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "soilrl/config.hpp"
#include "soilrl/weather.hpp"

namespace soilrl {

enum Action : int { kNoClean = 0, kClean = 1 };

inline constexpr std::size_t kStateFeatures = 6;
inline constexpr std::size_t kMaxObservationSize = 7;

/// Normalized agent-facing state:
///   [deposition, days_since_clean, temperature, wind_speed, particulate_matter, irradiance]
/// plus relative humidity when ScenarioConfig::include_humidity is set.
struct Observation {
  std::array<double, kMaxObservationSize> values{};
  std::size_t size = kStateFeatures;

  std::span<const double> view() const { return {values.data(), size}; }
  double operator[](std::size_t i) const { return values[i]; }
};

/// Per-feature divisors for NormalizationMode::kFeatureScaled.
inline constexpr std::array<double, kMaxObservationSize> kFeatureScales{5.0, 100.0, 55.0, 30.0, 5.0, 9000.0, 100.0};

struct EnvState {
  std::int64_t day_index = 0;
  double soiling = 0.0;  // g/m^2 at the start of the day
  std::int64_t days_since_clean = 0;
  WeatherDay today;  // weather of the day about to be simulated
  double cumulative_cost = 0.0;
  std::int64_t cumulative_cleanings = 0;
};

struct StepInfo {
  double energy_loss_cost = 0.0;
  double cleaning_cost_incurred = 0.0;
  double efficiency = 0.0;
  double soiling = 0.0;  // end of day
  WeatherDay weather;
};

struct StepResult {
  Observation observation;
  double reward = 0.0;
  bool done = false;
  StepInfo info;
};

/// Revenue lost to soiling for one day: tariff * area * GHI(kWh/m^2) *
/// (clean efficiency at the same age - actual efficiency).
double energy_loss_cost(const ScenarioConfig& cfg, double irradiance_wh, double soiling, double tau);

/// Daily soiling MDP over the panel lifetime.
///
/// Each step(): (1) clean if asked, (2) apply today's weather, (3) deposit
/// calibrated dust, (4) degrade, (5) cost the lost energy, (6) emit the reward,
/// (7) advance the day and draw tomorrow's weather. Today's weather is drawn
/// at the end of the previous step (or in reset()) so the observation can
/// show it; the draw sequence is one WeatherDay per simulated day.
class SoilingEnv {
 public:
  /// Throws ConfigError on an invalid config; loads the weather model file if
  /// the config names one.
  explicit SoilingEnv(ScenarioConfig cfg);
  SoilingEnv(ScenarioConfig cfg, std::shared_ptr<const MonthlyWeatherModel> model);

  /// Starts an episode whose weather streams are seeded from `episode_seed`.
  Observation reset(std::uint64_t episode_seed);
  /// Starts an episode seeded from config().seed.
  Observation reset() { return reset(cfg_.seed); }

  /// Throws StateError once the episode is done (or before the first reset).
  StepResult step(int action);

  Observation observe() const;
  const EnvState& state() const { return state_; }
  const ScenarioConfig& config() const { return cfg_; }
  std::size_t observation_size() const { return cfg_.include_humidity ? 7 : 6; }
  bool done() const { return done_; }

  /// Replaces sampled weather with a deterministic function of the day (tests).
  using WeatherOverride = std::function<WeatherDay(std::int64_t day, int month)>;
  void set_weather_override(WeatherOverride fn) { override_ = std::move(fn); }

 private:
  WeatherDay draw_weather(std::int64_t day);

  ScenarioConfig cfg_;
  std::shared_ptr<const MonthlyWeatherModel> model_;
  std::unique_ptr<WeatherStreams> streams_;
  WeatherOverride override_;
  EnvState state_;
  bool started_ = false;
  bool done_ = false;
};

/// Outcome of one full episode.
struct EpisodeSummary {
  double total_cost = 0.0;
  double total_reward = 0.0;
  double energy_loss = 0.0;
  std::int64_t cleanings = 0;
};

/// Runs `env` from reset(episode_seed) to done with `choose` picking actions.
/// `on_step` (optional) sees the pre-step observation, the action and the result.
EpisodeSummary run_episode(SoilingEnv& env, std::uint64_t episode_seed,
                           const std::function<int(const Observation&, const EnvState&)>& choose,
                           const std::function<void(const Observation&, int, const StepResult&)>& on_step = {});

/// Sum of per-step energy-loss and cleaning costs of a recorded episode.
double total_cost(std::span<const StepInfo> trace);

}  // namespace soilrl
