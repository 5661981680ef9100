#include "soilrl/env.hpp"

#include "soilrl/errors.hpp"
#include "soilrl/soiling.hpp"

namespace soilrl {
namespace {

std::shared_ptr<const MonthlyWeatherModel> model_for(const ScenarioConfig& cfg) {
  if (cfg.weather_model_path.empty())
    return std::shared_ptr<const MonthlyWeatherModel>(&MonthlyWeatherModel::abu_dhabi(),
                                                      [](const MonthlyWeatherModel*) {});
  return std::make_shared<const MonthlyWeatherModel>(load_weather_model(cfg.weather_model_path));
}

const ScenarioConfig& validated(const ScenarioConfig& cfg) {
  cfg.validate();
  return cfg;
}

}  // namespace

double energy_loss_cost(const ScenarioConfig& cfg, double irradiance_wh, double soiling, double tau) {
  const double clean_eff = efficiency(0.0, tau, cfg.soiling);
  const double eff = efficiency(soiling, tau, cfg.soiling);
  return cfg.tariff * cfg.panel_area * (irradiance_wh / 1000.0) * (clean_eff - eff);
}

SoilingEnv::SoilingEnv(ScenarioConfig cfg) : SoilingEnv(cfg, model_for(validated(cfg))) {}

SoilingEnv::SoilingEnv(ScenarioConfig cfg, std::shared_ptr<const MonthlyWeatherModel> model)
    : cfg_(std::move(cfg)), model_(std::move(model)) {
  cfg_.validate();
  if (!model_) throw ConfigError("weather model is null");
}

WeatherDay SoilingEnv::draw_weather(std::int64_t day) {
  const int month = month_of_day(day, cfg_.start_month);
  if (override_) return override_(day, month);
  return model_->sample_day(month, *streams_);
}

Observation SoilingEnv::reset(std::uint64_t episode_seed) {
  streams_ = std::make_unique<WeatherStreams>(episode_seed);
  state_ = EnvState{};
  state_.today = draw_weather(0);
  started_ = true;
  done_ = false;
  return observe();
}

Observation SoilingEnv::observe() const {
  Observation obs;
  obs.size = observation_size();
  const auto& w = state_.today;
  obs.values = {state_.soiling,
                static_cast<double>(state_.days_since_clean),
                w.temperature,
                w.wind_speed,
                w.particulate_matter,
                w.irradiance,
                w.relative_humidity};
  for (std::size_t i = 0; i < obs.size; ++i)
    obs.values[i] /= cfg_.normalization_mode == NormalizationMode::kFeatureScaled ? kFeatureScales[i] : 10.0;
  for (std::size_t i = obs.size; i < kMaxObservationSize; ++i) obs.values[i] = 0.0;
  return obs;
}

StepResult SoilingEnv::step(int action) {
  if (!started_) throw StateError("step() before reset()");
  if (done_) throw StateError("step() after the episode finished");
  if (action != kNoClean && action != kClean) throw StateError("action must be 0 or 1");

  StepResult out;
  auto& s = state_;
  const bool clean = action == kClean;
  if (clean) {
    s.soiling = 0.0;
    s.days_since_clean = 0;
    out.info.cleaning_cost_incurred = cfg_.cleaning_cost;
    ++s.cumulative_cleanings;
  }

  const WeatherDay& w = s.today;
  const double d = calibrate(daily_soiling(w.wind_speed, w.particulate_matter), w.relative_humidity, cfg_.soiling.k);
  s.soiling = accumulate(s.soiling, d, false, cfg_.soiling.beta_residue);

  const double tau = degradation_factor(static_cast<int>(s.day_index / 365), cfg_.soiling.annual_degradation);
  out.info.efficiency = efficiency(s.soiling, tau, cfg_.soiling);
  out.info.energy_loss_cost = energy_loss_cost(cfg_, w.irradiance, s.soiling, tau);
  out.info.soiling = s.soiling;
  out.info.weather = w;

  const double step_cost = out.info.energy_loss_cost + out.info.cleaning_cost_incurred;
  s.cumulative_cost += step_cost;

  ++s.day_index;
  ++s.days_since_clean;
  done_ = s.day_index >= cfg_.horizon_days();

  if (cfg_.reward_mode == RewardMode::kPerStep)
    out.reward = -step_cost;
  else
    out.reward = done_ ? -s.cumulative_cost : 0.0;

  if (!done_) s.today = draw_weather(s.day_index);
  out.done = done_;
  out.observation = observe();
  return out;
}

EpisodeSummary run_episode(SoilingEnv& env, std::uint64_t episode_seed,
                           const std::function<int(const Observation&, const EnvState&)>& choose,
                           const std::function<void(const Observation&, int, const StepResult&)>& on_step) {
  EpisodeSummary sum;
  Observation obs = env.reset(episode_seed);
  for (;;) {
    const int a = choose(obs, env.state());
    StepResult r = env.step(a);
    sum.total_reward += r.reward;
    sum.energy_loss += r.info.energy_loss_cost;
    if (on_step) on_step(obs, a, r);
    obs = r.observation;
    if (r.done) break;
  }
  sum.total_cost = env.state().cumulative_cost;
  sum.cleanings = env.state().cumulative_cleanings;
  return sum;
}

double total_cost(std::span<const StepInfo> trace) {
  double total = 0.0;
  for (const auto& s : trace) total += s.energy_loss_cost + s.cleaning_cost_incurred;
  return total;
}

}  // namespace soilrl
