#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "soilrl/soiling.hpp"

namespace soilrl {

enum class RewardMode { kPerStep, kTerminal };
enum class NormalizationMode { kFeatureScaled, kPaperDiv10 };

std::string_view to_string(RewardMode m);
std::string_view to_string(NormalizationMode m);
RewardMode parse_reward_mode(std::string_view s);
NormalizationMode parse_normalization_mode(std::string_view s);

/// Panel area (m^2) obtained by the S3exp calibration run and frozen for all
/// presets. See `soilrl calibrate`.
inline constexpr double kCalibratedPanelArea = 0.401;

struct ScenarioConfig {
  std::string name = "custom";
  double tariff = 0.073;         // USD/kWh
  double cleaning_cost = 0.0583;  // USD/panel/cycle
  double panel_area = kCalibratedPanelArea;  // m^2
  int horizon_years = 20;
  RewardMode reward_mode = RewardMode::kPerStep;
  NormalizationMode normalization_mode = NormalizationMode::kFeatureScaled;
  bool include_humidity = false;
  int start_month = 1;
  std::uint64_t seed = 1;
  SoilingParams soiling;
  std::string weather_model_path;  // empty: compiled-in Abu Dhabi model

  /// Throws ConfigError.
  void validate() const;
  int horizon_days() const { return 365 * horizon_years; }
};

/// The ten electricity-tariff / cleaning-cost cases S1exp..S5exp, S1uae..S5uae.
const std::vector<ScenarioConfig>& presets();
/// Throws ConfigError for unknown names.
ScenarioConfig preset(std::string_view name);
std::vector<std::string> preset_names();

/// `key = value` text, '#' comments. Unknown keys are an error. A `preset`
/// key, if present, must come first and seeds the remaining fields.
ScenarioConfig parse_scenario(std::string_view text);
ScenarioConfig load_scenario(const std::string& path);
std::string format_scenario(const ScenarioConfig& cfg);

/// Resolves a CLI case argument: a preset name or a path to a scenario file.
ScenarioConfig resolve_scenario(const std::string& name_or_path);

}  // namespace soilrl
