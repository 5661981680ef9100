#include "soilrl/config.hpp"

#include <filesystem>
#include <sstream>

#include "soilrl/errors.hpp"
#include "soilrl/text.hpp"

namespace soilrl {

std::string_view to_string(RewardMode m) { return m == RewardMode::kPerStep ? "per_step" : "terminal"; }

std::string_view to_string(NormalizationMode m) {
  return m == NormalizationMode::kFeatureScaled ? "feature_scaled" : "paper_div10";
}

RewardMode parse_reward_mode(std::string_view s) {
  if (s == "per_step") return RewardMode::kPerStep;
  if (s == "terminal") return RewardMode::kTerminal;
  throw ConfigError("unknown reward mode '" + std::string(s) + "'");
}

NormalizationMode parse_normalization_mode(std::string_view s) {
  if (s == "feature_scaled") return NormalizationMode::kFeatureScaled;
  if (s == "paper_div10") return NormalizationMode::kPaperDiv10;
  throw ConfigError("unknown normalization mode '" + std::string(s) + "'");
}

void ScenarioConfig::validate() const {
  if (!(tariff >= 0.0)) throw ConfigError("tariff must be non-negative");
  if (!(cleaning_cost >= 0.0)) throw ConfigError("cleaning_cost must be non-negative");
  if (!(panel_area > 0.0)) throw ConfigError("panel_area must be positive");
  if (horizon_years < 1) throw ConfigError("horizon_years must be at least 1");
  if (start_month < 1 || start_month > 12) throw ConfigError("start_month must lie in 1..12");
  soiling.validate();
}

const std::vector<ScenarioConfig>& presets() {
  static const std::vector<ScenarioConfig> all = [] {
    std::vector<ScenarioConfig> out;
    const std::pair<const char*, double> tariffs[] = {{"exp", 0.073}, {"uae", 0.018}};
    const double costs[] = {0.0183, 0.0383, 0.0583, 0.0783, 0.0983};
    for (const auto& [suffix, tariff] : tariffs) {
      for (int i = 0; i < 5; ++i) {
        ScenarioConfig c;
        c.name = "S" + std::to_string(i + 1) + suffix;
        c.tariff = tariff;
        c.cleaning_cost = costs[i];
        out.push_back(c);
      }
    }
    return out;
  }();
  return all;
}

ScenarioConfig preset(std::string_view name) {
  for (const auto& p : presets())
    if (p.name == name) return p;
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& p : presets()) names.push_back(p.name);
  return names;
}

ScenarioConfig parse_scenario(std::string_view text) {
  ScenarioConfig cfg;
  int line_no = 0;
  bool any_field = false;
  for (auto line : split(text, '\n')) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no, 1);
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const int value_col = static_cast<int>(eq) + 2;
    auto number = [&] {
      double v = 0.0;
      if (!parse_double(value, v)) throw ParseError("invalid number '" + std::string(value) + "'", line_no, value_col);
      return v;
    };
    auto integer = [&] {
      const double v = number();
      if (v != static_cast<double>(static_cast<long long>(v)))
        throw ParseError("expected an integer", line_no, value_col);
      return static_cast<long long>(v);
    };
    if (key == "preset") {
      if (any_field) throw ParseError("'preset' must precede other keys", line_no, 1);
      cfg = preset(value);
    } else if (key == "name") {
      cfg.name = std::string(value);
    } else if (key == "tariff") {
      cfg.tariff = number();
    } else if (key == "cleaning_cost") {
      cfg.cleaning_cost = number();
    } else if (key == "panel_area") {
      cfg.panel_area = number();
    } else if (key == "horizon_years") {
      cfg.horizon_years = static_cast<int>(integer());
    } else if (key == "reward_mode") {
      cfg.reward_mode = parse_reward_mode(value);
    } else if (key == "normalization_mode") {
      cfg.normalization_mode = parse_normalization_mode(value);
    } else if (key == "include_humidity") {
      cfg.include_humidity = integer() != 0;
    } else if (key == "start_month") {
      cfg.start_month = static_cast<int>(integer());
    } else if (key == "seed") {
      std::uint64_t s = 0;
      for (char ch : value) {
        if (ch < '0' || ch > '9') throw ParseError("seed must be a non-negative integer", line_no, value_col);
        s = s * 10 + static_cast<std::uint64_t>(ch - '0');
      }
      cfg.seed = s;
    } else if (key == "soiling.k") {
      cfg.soiling.k = number();
    } else if (key == "soiling.beta_residue") {
      cfg.soiling.beta_residue = number();
    } else if (key == "soiling.annual_degradation") {
      cfg.soiling.annual_degradation = number();
    } else if (key == "soiling.eff_max") {
      cfg.soiling.eff_max = number();
    } else if (key == "weather_model") {
      cfg.weather_model_path = std::string(value);
    } else {
      throw ParseError("unknown key '" + std::string(key) + "'", line_no, 1);
    }
    any_field = true;
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  auto cfg = parse_scenario(read_text_file(path));
  // Relative weather model paths resolve against the scenario file.
  if (!cfg.weather_model_path.empty() && std::filesystem::path(cfg.weather_model_path).is_relative())
    cfg.weather_model_path = (std::filesystem::path(path).parent_path() / cfg.weather_model_path).string();
  return cfg;
}

std::string format_scenario(const ScenarioConfig& c) {
  std::ostringstream out;
  out << "name = " << c.name << '\n'
      << "tariff = " << format_double(c.tariff) << '\n'
      << "cleaning_cost = " << format_double(c.cleaning_cost) << '\n'
      << "panel_area = " << format_double(c.panel_area) << '\n'
      << "horizon_years = " << c.horizon_years << '\n'
      << "reward_mode = " << to_string(c.reward_mode) << '\n'
      << "normalization_mode = " << to_string(c.normalization_mode) << '\n'
      << "include_humidity = " << (c.include_humidity ? 1 : 0) << '\n'
      << "start_month = " << c.start_month << '\n'
      << "seed = " << c.seed << '\n'
      << "soiling.k = " << format_double(c.soiling.k) << '\n'
      << "soiling.beta_residue = " << format_double(c.soiling.beta_residue) << '\n'
      << "soiling.annual_degradation = " << format_double(c.soiling.annual_degradation) << '\n'
      << "soiling.eff_max = " << format_double(c.soiling.eff_max) << '\n';
  if (!c.weather_model_path.empty()) out << "weather_model = " << c.weather_model_path << '\n';
  return out.str();
}

ScenarioConfig resolve_scenario(const std::string& name_or_path) {
  for (const auto& p : presets())
    if (p.name == name_or_path) return p;
  if (std::filesystem::exists(name_or_path)) return load_scenario(name_or_path);
  throw ConfigError("'" + name_or_path + "' is neither a preset nor a readable scenario file");
}

}  // namespace soilrl
