#include "soilrl/soiling.hpp"

#include <algorithm>
#include <cmath>

#include "soilrl/errors.hpp"

namespace soilrl {

void SoilingParams::validate() const {
  if (!(annual_degradation >= 0.0 && annual_degradation < 1.0))
    throw ConfigError("annual_degradation must lie in [0, 1)");
  if (!(beta_residue > 0.0)) throw ConfigError("beta_residue must be positive");
  if (!(eff_max > 0.0 && eff_max <= 1.0)) throw ConfigError("eff_max must lie in (0, 1]");
  if (!(k >= 0.0)) throw ConfigError("k must be non-negative");
}

double daily_soiling(double ws, double pm) {
  return 0.00144 * (10.6 - 4.99 * ws + 247.0 * pm - 73.4 * ws * pm);
}

double calibrate(double deposition, double rh, double k) {
  if (deposition >= 0.0) return deposition;
  const double f = std::clamp(k / rh, 0.0, 1.0);
  return f * deposition;
}

double accumulate(double previous, double calibrated_deposition, bool cleaned_today, double beta_residue) {
  if (cleaned_today) return 0.0;
  const double s = previous + calibrated_deposition;
  return s >= beta_residue ? s : beta_residue;
}

double degradation_factor(int years_elapsed, double annual_degradation) {
  return std::pow(1.0 - annual_degradation, years_elapsed);
}

double efficiency(double s, double tau, const SoilingParams& p) {
  const double cubic = ((p.c3 * s + p.c2) * s + p.c1) * s + p.eff_max;
  return std::max(0.0, tau * cubic);
}

}  // namespace soilrl
