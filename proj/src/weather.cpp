#include "soilrl/weather.hpp"

#include <initializer_list>
#include <sstream>

#include "soilrl/errors.hpp"
#include "soilrl/text.hpp"

namespace soilrl {
namespace {

constexpr std::array<std::string_view, kNumWeatherVars> kVarNames{
    "temperature", "wind_speed", "particulate_matter", "irradiance", "relative_humidity"};

constexpr std::array<int, 12> kMonthDays{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};

// Clamp ranges in the fitted unit of each variable. Wind speed was fitted in
// km/h; [0, 108] km/h is [0, 30] m/s.
struct VarDefaults {
  double lo, hi, to_model_unit;
};
constexpr std::array<VarDefaults, kNumWeatherVars> kVarDefaults{{
    {0.0, 55.0, 1.0},
    {0.0, 108.0, 1.0 / 3.6},
    {0.0, 5.0, 1.0},
    {0.0, 9000.0, 1.0},
    {1.0, 100.0, 1.0},
}};

WeatherCell make_cell(WeatherVar v, Family f, std::initializer_list<double> params) {
  const auto& d = kVarDefaults[static_cast<std::size_t>(v)];
  return WeatherCell{DistributionSpec(f, std::span<const double>(params.begin(), params.size()), d.lo, d.hi),
                     d.to_model_unit};
}

MonthlyWeatherModel build_abu_dhabi() {
  using F = Family;
  using V = WeatherVar;
  MonthlyWeatherModel::Table t;
  auto set = [&](int month, V v, F f, std::initializer_list<double> p) {
    t[month - 1][static_cast<std::size_t>(v)] = make_cell(v, f, p);
  };
  // clang-format off
  set(1, V::kTemperature, F::kLognormal, {17.0, 1.16, 0.559});
  set(1, V::kWindSpeed, F::kLognormal, {3.77, 1.82, 0.672});
  set(1, V::kParticulateMatter, F::kLognormal, {1.56e-2, -2.78, 1.08});
  set(1, V::kIrradiance, F::kWeibull, {1.93e3, 4.79, 2.7e3});
  set(1, V::kRelativeHumidity, F::kLoglogistic, {0, 12, 61.7});

  set(2, V::kTemperature, F::kLognormal, {16.0, 1.57, 0.546});
  set(2, V::kWindSpeed, F::kLognormal, {4.05, 1.82, 0.657});
  set(2, V::kParticulateMatter, F::kLognormal, {-1.05e-2, -2.0, 0.796});
  set(2, V::kIrradiance, F::kBeta, {1.61e3, 6.7e3, 4.96, 2.23});
  set(2, V::kRelativeHumidity, F::kBeta, {0, 98.8, 10.2, 6.35});

  set(3, V::kTemperature, F::kTriangular, {18.0, 31.6, 22.2});
  set(3, V::kWindSpeed, F::kLognormal, {2.92, 2.24, 0.467});
  set(3, V::kParticulateMatter, F::kLognormal, {-2.04e-2, -1.86, 0.684});
  set(3, V::kIrradiance, F::kJohnsonSB, {-8.48e3, 1.61e4, -2.87, 1.13});
  set(3, V::kRelativeHumidity, F::kWeibull, {0, 5.98, 60.3});

  set(4, V::kTemperature, F::kLognormal, {13.2, 2.74, 0.178});
  set(4, V::kWindSpeed, F::kLognormal, {2.44, 2.2, 0.351});
  set(4, V::kParticulateMatter, F::kLognormal, {-5.17e-2, -1.56, 0.568});
  set(4, V::kIrradiance, F::kBeta, {1.76e3, 8.7e3, 4.39, 1.95});
  set(4, V::kRelativeHumidity, F::kBeta, {0, 77.1, 4.51, 3.15});

  set(5, V::kTemperature, F::kLognormal, {-14.1, 3.84e-2, 3.86});
  set(5, V::kWindSpeed, F::kLognormal, {6.49, 1.47, 0.555});
  set(5, V::kParticulateMatter, F::kLognormal, {-1.28e-3, -1.78, 0.648});
  set(5, V::kIrradiance, F::kWeibull, {5.25e3, 3.92, 2.39e3});
  set(5, V::kRelativeHumidity, F::kLoglogistic, {0, 10.3, 45.2});

  set(6, V::kTemperature, F::kNormal, {34.9, 1.64});
  set(6, V::kWindSpeed, F::kLognormal, {7.21, 1.25, 0.708});
  set(6, V::kParticulateMatter, F::kLognormal, {9.11e-3, -1.64, 0.629});
  set(6, V::kIrradiance, F::kWeibull, {6.5e3, 4.01, 1.36e3});
  set(6, V::kRelativeHumidity, F::kJohnsonSB, {0, 89, -0.606, 1.89});

  set(7, V::kTemperature, F::kNormal, {36.1, 2.11});
  set(7, V::kWindSpeed, F::kLognormal, {4.9, 1.87, 0.309});
  set(7, V::kParticulateMatter, F::kLognormal, {7.43e-2, -1.94, 0.811});
  set(7, V::kIrradiance, F::kWeibull, {4.56e3, 6.48, 2.85e3});
  set(7, V::kRelativeHumidity, F::kJohnsonSB, {0, 82.8, -0.893, 1.98});

  set(8, V::kTemperature, F::kLognormal, {29.2, 1.92, 0.125});
  set(8, V::kWindSpeed, F::kLognormal, {-461, 6.16, 3.51e-3});
  set(8, V::kParticulateMatter, F::kLognormal, {2.37e-2, -1.89, 0.946});
  set(8, V::kIrradiance, F::kWeibull, {4.89e3, 5.33, 2.22e3});
  set(8, V::kRelativeHumidity, F::kBeta, {0, 73, 5.98, 1.74});

  set(9, V::kTemperature, F::kNormal, {34.2, 1.72});
  set(9, V::kWindSpeed, F::kLognormal, {2.56, 2.12, 0.165});
  set(9, V::kParticulateMatter, F::kLognormal, {7.96e-3, -1.97, 0.735});
  set(9, V::kIrradiance, F::kWeibull, {5.4e3, 4.34, 1.38e3});
  set(9, V::kRelativeHumidity, F::kJohnsonSB, {0, 80.4, -1.19, 1.48});

  set(10, V::kTemperature, F::kNormal, {30.8, 1.59});
  set(10, V::kWindSpeed, F::kLognormal, {6.25, 1.37, 0.374});
  set(10, V::kParticulateMatter, F::kLognormal, {2.9e-2, -2.76, 0.718});
  set(10, V::kIrradiance, F::kWeibull, {3.38e3, 7.5, 2.52e3});
  set(10, V::kRelativeHumidity, F::kJohnsonSB, {0, 80.7, -1.43, 1.67});

  set(11, V::kTemperature, F::kTriangular, {21.3, 29.8, 27.9});
  set(11, V::kWindSpeed, F::kLognormal, {4.88, 1.58, 0.5});
  set(11, V::kParticulateMatter, F::kLognormal, {-3.75e-3, -2.39, 0.694});
  set(11, V::kIrradiance, F::kWeibull, {1.66e3, 6.85, 3.2e3});
  set(11, V::kRelativeHumidity, F::kWeibull, {0, 8.48, 61.7});

  set(12, V::kTemperature, F::kNormal, {22.8, 1.6});
  set(12, V::kWindSpeed, F::kLognormal, {4.89, 1.31, 0.695});
  set(12, V::kParticulateMatter, F::kLognormal, {1.11e-2, -3.03, 0.581});
  set(12, V::kIrradiance, F::kWeibull, {2.38e3, 7.49, 2.02e3});
  set(12, V::kRelativeHumidity, F::kGamma, {0, 59.1, 1.06});
  // clang-format on
  return MonthlyWeatherModel(std::move(t));
}

}  // namespace

std::string_view weather_var_name(WeatherVar v) { return kVarNames[static_cast<std::size_t>(v)]; }

WeatherVar parse_weather_var(std::string_view name) {
  for (std::size_t i = 0; i < kVarNames.size(); ++i)
    if (kVarNames[i] == name) return static_cast<WeatherVar>(i);
  throw ParameterError("unknown weather variable '" + std::string(name) + "'");
}

WeatherStreams::WeatherStreams(std::uint64_t seed)
    : streams{RandomStream(seed, 0), RandomStream(seed, 1), RandomStream(seed, 2), RandomStream(seed, 3),
              RandomStream(seed, 4)} {}

void WeatherStreams::force_uniform(double u) {
  for (auto& s : streams) s.force_uniform(u);
}

MonthlyWeatherModel::MonthlyWeatherModel(Table table) : table_(std::move(table)) {
  for (std::size_t m = 0; m < 12; ++m)
    for (std::size_t v = 0; v < kNumWeatherVars; ++v)
      if (!table_[m][v])
        throw ParameterError("weather model missing month " + std::to_string(m + 1) + " variable " +
                             std::string(kVarNames[v]));
}

const MonthlyWeatherModel& MonthlyWeatherModel::abu_dhabi() {
  static const MonthlyWeatherModel model = build_abu_dhabi();
  return model;
}

const WeatherCell& MonthlyWeatherModel::cell(int month, WeatherVar v) const {
  if (month < 1 || month > 12) throw ParameterError("month out of range: " + std::to_string(month));
  return *table_[month - 1][static_cast<std::size_t>(v)];
}

WeatherDay MonthlyWeatherModel::sample_day(int month, WeatherStreams& streams) const {
  auto draw = [&](WeatherVar v) {
    const auto& c = cell(month, v);
    return sample(c.dist, streams[v]) * c.to_model_unit;
  };
  WeatherDay d;
  d.temperature = draw(WeatherVar::kTemperature);
  d.wind_speed = draw(WeatherVar::kWindSpeed);
  d.particulate_matter = draw(WeatherVar::kParticulateMatter);
  d.irradiance = draw(WeatherVar::kIrradiance);
  d.relative_humidity = draw(WeatherVar::kRelativeHumidity);
  return d;
}

int month_of_day(std::int64_t day_index, int start_month) {
  int offset = 0;
  for (int m = 1; m < start_month; ++m) offset += kMonthDays[m - 1];
  int doy = static_cast<int>((offset + day_index) % 365);
  for (int m = 0; m < 12; ++m) {
    if (doy < kMonthDays[m]) return m + 1;
    doy -= kMonthDays[m];
  }
  return 12;
}

MonthlyWeatherModel parse_weather_model(std::string_view text) {
  MonthlyWeatherModel::Table table;
  int line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    if (line.starts_with("month,")) continue;  // header
    const auto fields = split(line, ',');
    if (fields.size() != 10)
      throw ParseError("expected 10 comma-separated fields, got " + std::to_string(fields.size()), line_no, 1);
    auto column_of = [&](std::size_t idx) {
      int col = 1;
      for (std::size_t i = 0; i < idx; ++i) col += static_cast<int>(fields[i].size()) + 1;
      return col;
    };
    auto number = [&](std::size_t idx) {
      double v = 0.0;
      if (!parse_double(fields[idx], v))
        throw ParseError("invalid number '" + std::string(trim(fields[idx])) + "'", line_no, column_of(idx));
      return v;
    };
    const double month_d = number(0);
    const int month = static_cast<int>(month_d);
    if (month != month_d || month < 1 || month > 12)
      throw ParseError("month must be an integer in 1..12", line_no, column_of(0));
    WeatherVar var;
    Family fam;
    try {
      var = parse_weather_var(trim(fields[1]));
    } catch (const ParameterError& e) {
      throw ParseError(e.what(), line_no, column_of(1));
    }
    try {
      fam = parse_family(trim(fields[2]));
    } catch (const ParameterError& e) {
      throw ParseError(e.what(), line_no, column_of(2));
    }
    std::vector<double> params;
    for (std::size_t i = 3; i < 7; ++i)
      if (!trim(fields[i]).empty()) params.push_back(number(i));
    if (params.size() != family_arity(fam))
      throw ParameterError("line " + std::to_string(line_no) + ": " + std::string(family_name(fam)) +
                           " expects " + std::to_string(family_arity(fam)) + " parameters, got " +
                           std::to_string(params.size()));
    auto& slot = table[month - 1][static_cast<std::size_t>(var)];
    if (slot) throw ParseError("duplicate cell", line_no, 1);
    slot = WeatherCell{DistributionSpec(fam, params, number(7), number(8)), number(9)};
  }
  return MonthlyWeatherModel(std::move(table));
}

MonthlyWeatherModel load_weather_model(const std::filesystem::path& path) {
  return parse_weather_model(read_text_file(path.string()));
}

std::string format_weather_model(const MonthlyWeatherModel& model) {
  std::ostringstream out;
  out << "# Monthly weather distributions (Abu Dhabi 2018-2020 fits).\n"
      << "# Parameters in the fitted order; clamps in the fitted unit; draws are\n"
      << "# multiplied by to_model_unit after clamping.\n"
      << "month,variable,family,p1,p2,p3,p4,clamp_lo,clamp_hi,to_model_unit\n";
  for (int m = 1; m <= 12; ++m) {
    for (std::size_t v = 0; v < kNumWeatherVars; ++v) {
      const auto& c = model.cell(m, static_cast<WeatherVar>(v));
      out << m << ',' << kVarNames[v] << ',' << family_name(c.dist.family());
      const auto p = c.dist.params();
      for (std::size_t i = 0; i < 4; ++i) {
        out << ',';
        if (i < p.size()) out << format_double(p[i]);
      }
      out << ',' << format_double(c.dist.clamp_lo()) << ',' << format_double(c.dist.clamp_hi()) << ','
          << format_double(c.to_model_unit) << '\n';
    }
  }
  return out.str();
}

void save_weather_model(const MonthlyWeatherModel& model, const std::filesystem::path& path) {
  write_text_file(path.string(), format_weather_model(model));
}

}  // namespace soilrl
