#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "soilrl/distributions.hpp"
#include "soilrl/rng.hpp"

namespace soilrl {

enum class WeatherVar : std::uint8_t {
  kTemperature = 0,
  kWindSpeed = 1,
  kParticulateMatter = 2,
  kIrradiance = 3,
  kRelativeHumidity = 4,
};
inline constexpr std::size_t kNumWeatherVars = 5;

std::string_view weather_var_name(WeatherVar v);
/// Throws ParameterError for unknown names.
WeatherVar parse_weather_var(std::string_view name);

/// One day's weather in the units the soiling model consumes.
struct WeatherDay {
  double temperature = 0.0;         // degC
  double wind_speed = 0.0;          // m/s
  double particulate_matter = 0.0;  // g/m^2
  double irradiance = 0.0;          // Wh/m^2/day
  double relative_humidity = 0.0;   // percent

  friend bool operator==(const WeatherDay&, const WeatherDay&) = default;
};

/// A fitted distribution for one (month, variable) cell. Draws are taken in
/// the fitted data's own unit, clamped, then multiplied by `to_model_unit`
/// (wind speed was fitted in km/h; the soiling model wants m/s).
struct WeatherCell {
  DistributionSpec dist;
  double to_model_unit = 1.0;

  friend bool operator==(const WeatherCell&, const WeatherCell&) = default;
};

/// Per-variable random streams. Stream ids are the WeatherVar values.
struct WeatherStreams {
  std::array<RandomStream, kNumWeatherVars> streams;

  explicit WeatherStreams(std::uint64_t seed);
  RandomStream& operator[](WeatherVar v) { return streams[static_cast<std::size_t>(v)]; }
  /// Forces every uniform to `u` on all streams (test hook).
  void force_uniform(double u);
};

/// 12 months x 5 variables of fitted distributions. Immutable after
/// construction; sampling state lives in caller-owned WeatherStreams.
class MonthlyWeatherModel {
 public:
  using Table = std::array<std::array<std::optional<WeatherCell>, kNumWeatherVars>, 12>;

  /// Throws ParameterError if any of the 60 cells is missing.
  explicit MonthlyWeatherModel(Table table);

  /// The bundled Abu Dhabi 2018-2020 fits, compiled in.
  static const MonthlyWeatherModel& abu_dhabi();

  /// month in 1..12.
  const WeatherCell& cell(int month, WeatherVar v) const;

  /// One draw per variable from `month`'s cells, each from its own stream.
  WeatherDay sample_day(int month, WeatherStreams& streams) const;

  friend bool operator==(const MonthlyWeatherModel&, const MonthlyWeatherModel&) = default;

 private:
  Table table_;
};

/// Plain-text model file: one CSV record per (month, variable):
///   month,variable,family,p1,p2,p3,p4,clamp_lo,clamp_hi,to_model_unit
/// Unused trailing parameters are left empty. '#' starts a comment line.
/// Throws ParseError with line/column on malformed input, ParameterError on
/// arity or domain violations, and requires all 60 cells.
MonthlyWeatherModel load_weather_model(const std::filesystem::path& path);
MonthlyWeatherModel parse_weather_model(std::string_view text);
std::string format_weather_model(const MonthlyWeatherModel& model);
void save_weather_model(const MonthlyWeatherModel& model, const std::filesystem::path& path);

/// Calendar helpers: 365-day years, standard month lengths, no leap days.
int month_of_day(std::int64_t day_index, int start_month = 1);

}  // namespace soilrl
