#include "soilrl/distributions.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>

#include "soilrl/errors.hpp"

namespace soilrl {
namespace {

constexpr std::array<std::pair<Family, std::string_view>, 8> kNames{{
    {Family::kNormal, "Normal"},
    {Family::kLognormal, "Lognormal"},
    {Family::kTriangular, "Triangular"},
    {Family::kWeibull, "Weibull"},
    {Family::kBeta, "Beta"},
    {Family::kGamma, "Gamma"},
    {Family::kJohnsonSB, "JohnsonSB"},
    {Family::kLoglogistic, "Loglogistic"},
}};

void require(bool ok, std::string_view family, const char* what) {
  if (!ok) throw ParameterError(std::string(family) + ": " + what);
}

}  // namespace

std::string_view family_name(Family f) {
  for (const auto& [fam, name] : kNames)
    if (fam == f) return name;
  return "?";
}

Family parse_family(std::string_view name) {
  for (const auto& [fam, n] : kNames)
    if (n == name) return fam;
  throw ParameterError("unknown distribution family '" + std::string(name) + "'");
}

std::size_t family_arity(Family f) {
  switch (f) {
    case Family::kNormal:
      return 2;
    case Family::kBeta:
    case Family::kJohnsonSB:
      return 4;
    default:
      return 3;
  }
}

DistributionSpec::DistributionSpec(Family family, std::span<const double> params, double clamp_lo,
                                   double clamp_hi)
    : family_(family), arity_(family_arity(family)), clamp_lo_(clamp_lo), clamp_hi_(clamp_hi) {
  const auto name = family_name(family);
  if (params.size() != arity_)
    throw ParameterError(std::string(name) + " expects " + std::to_string(arity_) +
                         " parameters, got " + std::to_string(params.size()));
  std::copy(params.begin(), params.end(), params_.begin());
  for (double p : params) require(std::isfinite(p), name, "non-finite parameter");
  require(clamp_lo < clamp_hi, name, "clamp_lo must be below clamp_hi");

  const auto& p = params_;
  switch (family) {
    case Family::kNormal:
      require(p[1] > 0, name, "standard deviation must be positive");
      break;
    case Family::kLognormal:
      require(p[2] > 0, name, "sigma must be positive");
      break;
    case Family::kTriangular:
      require(p[0] < p[1], name, "min must be below max");
      require(p[0] <= p[2] && p[2] <= p[1], name, "mode must lie in [min, max]");
      break;
    case Family::kWeibull:
      require(p[1] > 0, name, "shape must be positive");
      require(p[2] > 0, name, "scale must be positive");
      break;
    case Family::kBeta:
      require(p[0] < p[1], name, "min must be below max");
      require(p[2] > 0 && p[3] > 0, name, "shapes must be positive");
      break;
    case Family::kGamma:
      require(p[1] > 0, name, "scale must be positive");
      require(p[2] > 0, name, "shape must be positive");
      break;
    case Family::kJohnsonSB:
      require(p[1] > 0, name, "range must be positive");
      require(p[3] > 0, name, "xi must be positive");
      break;
    case Family::kLoglogistic:
      require(p[1] > 0, name, "shape must be positive");
      require(p[2] > 0, name, "scale must be positive");
      break;
  }
}

double gamma_variate(double shape, RandomStream& stream) {
  if (shape < 1.0) {
    const double boost = std::pow(stream.open_uniform(), 1.0 / shape);
    return gamma_variate(shape + 1.0, stream) * boost;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = stream.standard_normal();
    double v = 1.0 + c * x;
    const double u = stream.open_uniform();
    if (v <= 0.0) continue;
    v = v * v * v;
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double beta_variate(double aa, double bb, RandomStream& stream) {
  const double a = std::min(aa, bb);
  const double b = std::max(aa, bb);
  const double alpha = a + b;
  constexpr double kExpMax = DBL_MAX_EXP * 0.69314718055994530942;

  auto w_from = [&](double u1, double scale, double factor, double& v) {
    v = scale * std::log(u1 / (1.0 - u1));
    if (v > kExpMax) return DBL_MAX;
    const double w = factor * std::exp(v);
    return std::isinf(w) ? DBL_MAX : w;
  };

  if (a <= 1.0) {
    // Cheng BC.
    const double beta = 1.0 / a;
    const double delta = 1.0 + b - a;
    const double k1 = delta * (0.0138889 + 0.0416667 * a) / (b * beta - 0.777778);
    const double k2 = 0.25 + (0.5 + 0.25 / delta) * a;
    double v = 0.0;
    double w = 0.0;
    for (;;) {
      const double u1 = stream.open_uniform();
      const double u2 = stream.open_uniform();
      double z;
      if (u1 < 0.5) {
        const double y = u1 * u2;
        z = u1 * y;
        if (0.25 * u2 + z - y >= k1) continue;
      } else {
        z = u1 * u1 * u2;
        if (z <= 0.25) {
          w = w_from(u1, beta, b, v);
          break;
        }
        if (z >= k2) continue;
      }
      w = w_from(u1, beta, b, v);
      if (alpha * (std::log(alpha / (a + w)) + v) - 1.3862944 >= std::log(z)) break;
    }
    return aa == a ? a / (a + w) : w / (a + w);
  }

  // Cheng BB.
  const double beta = std::sqrt((alpha - 2.0) / (2.0 * a * b - alpha));
  const double gamma = a + 1.0 / beta;
  double v = 0.0;
  double w = 0.0;
  for (;;) {
    const double u1 = stream.open_uniform();
    const double u2 = stream.open_uniform();
    w = w_from(u1, beta, a, v);
    const double z = u1 * u1 * u2;
    const double r = gamma * v - 1.3862944;
    const double s = a + r - w;
    if (s + 2.609438 >= 5.0 * z) break;
    const double t = std::log(z);
    if (s > t) break;
    if (r + alpha * std::log(alpha / (b + w)) >= t) break;
  }
  return aa != a ? b / (b + w) : w / (b + w);
}

double sample_unclamped(const DistributionSpec& spec, RandomStream& stream) {
  const auto p = spec.params();
  switch (spec.family()) {
    case Family::kNormal:
      return p[0] + p[1] * stream.standard_normal();
    case Family::kLognormal:
      return p[0] + std::exp(p[1] + p[2] * stream.standard_normal());
    case Family::kTriangular: {
      const double lo = p[0], hi = p[1], mode = p[2];
      const double u = stream.uniform();
      const double split = (mode - lo) / (hi - lo);
      if (u < split) return lo + std::sqrt(u * (hi - lo) * (mode - lo));
      return hi - std::sqrt((1.0 - u) * (hi - lo) * (hi - mode));
    }
    case Family::kWeibull:
      return p[0] + p[2] * std::pow(-std::log(stream.open_uniform()), 1.0 / p[1]);
    case Family::kBeta:
      return p[0] + (p[1] - p[0]) * beta_variate(p[2], p[3], stream);
    case Family::kGamma:
      return p[0] + p[1] * gamma_variate(p[2], stream);
    case Family::kJohnsonSB: {
      const double z = stream.standard_normal();
      return p[0] + p[1] / (1.0 + std::exp(-(z - p[2]) / p[3]));
    }
    case Family::kLoglogistic: {
      const double u = stream.open_uniform();
      return p[0] + p[2] * std::pow(u / (1.0 - u), 1.0 / p[1]);
    }
  }
  return 0.0;
}

double sample(const DistributionSpec& spec, RandomStream& stream) {
  return std::clamp(sample_unclamped(spec, stream), spec.clamp_lo(), spec.clamp_hi());
}

}  // namespace soilrl
