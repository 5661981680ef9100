#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "soilrl/rng.hpp"

namespace soilrl {

enum class Family { kNormal, kLognormal, kTriangular, kWeibull, kBeta, kGamma, kJohnsonSB, kLoglogistic };

std::string_view family_name(Family f);
/// Throws ParameterError for unknown names.
Family parse_family(std::string_view name);
/// Number of parameters the family takes, in Table-1 order.
std::size_t family_arity(Family f);

/// One parametric family with its parameters exactly in the order Stat::Fit
/// prints them, plus the physical clamp range of the variable it feeds.
///
/// Parameter order per family:
///   Normal(mean, sd)
///   Lognormal(location, mu, sigma)          location + exp(mu + sigma Z)
///   Triangular(min, max, mode)
///   Weibull(location, shape, scale)         location + scale (-ln U)^(1/shape)
///   Beta(min, max, shape1, shape2)
///   Gamma(location, scale, shape)
///   JohnsonSB(lower, range, delta, xi)      lower + range / (1 + exp(-(Z - delta) / xi))
///   Loglogistic(location, shape, scale)     location + scale (U / (1 - U))^(1/shape)
class DistributionSpec {
 public:
  /// Validates arity, parameter domains and clamp_lo < clamp_hi. Throws
  /// ParameterError; sampling never throws.
  DistributionSpec(Family family, std::span<const double> params, double clamp_lo, double clamp_hi);

  Family family() const noexcept { return family_; }
  std::span<const double> params() const noexcept { return {params_.data(), arity_}; }
  double param(std::size_t i) const noexcept { return params_[i]; }
  double clamp_lo() const noexcept { return clamp_lo_; }
  double clamp_hi() const noexcept { return clamp_hi_; }

  friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;

 private:
  Family family_;
  std::array<double, 4> params_{};
  std::size_t arity_ = 0;
  double clamp_lo_;
  double clamp_hi_;
};

/// One draw before clamping.
///
/// Uniform draws consumed: one for Normal, Lognormal, Triangular, Weibull,
/// JohnsonSB and Loglogistic. Gamma (Marsaglia-Tsang) uses two per attempt,
/// plus one when shape < 1. Beta (Cheng BB/BC) uses two per attempt.
double sample_unclamped(const DistributionSpec& spec, RandomStream& stream);

/// One draw clamped to [clamp_lo, clamp_hi]. Out-of-range draws are clamped,
/// not resampled, so stream consumption does not depend on the bounds.
double sample(const DistributionSpec& spec, RandomStream& stream);

/// Standard gamma variate with unit scale (Marsaglia-Tsang).
double gamma_variate(double shape, RandomStream& stream);
/// Standard beta variate on [0, 1] (Cheng's BB for min(a, b) > 1, BC otherwise).
double beta_variate(double a, double b, RandomStream& stream);

}  // namespace soilrl
