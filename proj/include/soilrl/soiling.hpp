#pragma once

namespace soilrl {

/// Coefficients of the dust-accumulation and panel-efficiency model.
struct SoilingParams {
  double k = 0.06;                   // humidity calibration, f(RH) = k / RH (RH in percent)
  double beta_residue = 0.01;        // g/m^2 left on an uncleaned panel
  double annual_degradation = 0.05;  // fraction per year
  double eff_max = 0.192;            // clean-panel efficiency at year 0
  double c3 = -0.0026;               // efficiency cubic in soiling (g/m^2)
  double c2 = 0.032;
  double c1 = -0.1369;

  /// Throws ConfigError when a field is outside its domain.
  void validate() const;
};

/// Net daily deposition in g/m^2/day from wind speed (m/s) and particulate
/// matter (g/m^2). Negative values mean net removal by wind.
double daily_soiling(double wind_speed, double particulate_matter);

/// Scales the removal branch by f = min(1, k / rh); deposition passes through.
double calibrate(double deposition, double relative_humidity, double k);

/// Adds today's calibrated deposition. A cleaned panel is exactly 0; an
/// uncleaned panel never drops below the residue floor.
double accumulate(double previous, double calibrated_deposition, bool cleaned_today, double beta_residue);

/// (1 - rate)^years.
double degradation_factor(int years_elapsed, double annual_degradation);

/// tau * (c3 s^3 + c2 s^2 + c1 s + eff_max), floored at 0.
double efficiency(double soiling, double tau, const SoilingParams& params = {});

}  // namespace soilrl
