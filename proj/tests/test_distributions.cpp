#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "soilrl/distributions.hpp"
#include "soilrl/errors.hpp"

using namespace soilrl;

namespace {

DistributionSpec make(Family f, std::vector<double> p, double lo = -1e300, double hi = 1e300) {
  return DistributionSpec(f, p, lo, hi);
}

double mean_of(const DistributionSpec& d, int n, std::uint64_t seed) {
  RandomStream s(seed, 0);
  double sum = 0;
  for (int i = 0; i < n; ++i) sum += sample_unclamped(d, s);
  return sum / n;
}

}  // namespace

TEST(DistributionSpec, ArityMatchesFamily) {
  EXPECT_EQ(family_arity(Family::kNormal), 2u);
  EXPECT_EQ(family_arity(Family::kLognormal), 3u);
  EXPECT_EQ(family_arity(Family::kTriangular), 3u);
  EXPECT_EQ(family_arity(Family::kWeibull), 3u);
  EXPECT_EQ(family_arity(Family::kGamma), 3u);
  EXPECT_EQ(family_arity(Family::kLoglogistic), 3u);
  EXPECT_EQ(family_arity(Family::kBeta), 4u);
  EXPECT_EQ(family_arity(Family::kJohnsonSB), 4u);
}

TEST(DistributionSpec, RejectsWrongArity) {
  EXPECT_THROW(make(Family::kNormal, {1, 2, 3}), ParameterError);
  EXPECT_THROW(make(Family::kBeta, {0, 1, 2}), ParameterError);
}

TEST(DistributionSpec, RejectsBadDomains) {
  EXPECT_THROW(make(Family::kNormal, {0, -1}), ParameterError);
  EXPECT_THROW(make(Family::kTriangular, {5, 1, 3}), ParameterError);
  EXPECT_THROW(make(Family::kTriangular, {0, 1, 2}), ParameterError);
  EXPECT_THROW(make(Family::kWeibull, {0, 0, 1}), ParameterError);
  EXPECT_THROW(make(Family::kGamma, {0, 1, -2}), ParameterError);
  EXPECT_THROW(make(Family::kNormal, {0, 1}, 5, 5), ParameterError);
}

TEST(DistributionSpec, FamilyNamesRoundTrip) {
  for (auto f : {Family::kNormal, Family::kLognormal, Family::kTriangular, Family::kWeibull, Family::kBeta,
                 Family::kGamma, Family::kJohnsonSB, Family::kLoglogistic})
    EXPECT_EQ(parse_family(family_name(f)), f);
  EXPECT_THROW(parse_family("Cauchy"), ParameterError);
}

TEST(Sample, TriangularMonth3TemperatureStaysInSupport) {
  const auto d = make(Family::kTriangular, {18.0, 31.6, 22.2}, 0, 55);
  RandomStream s(3, 0);
  for (int i = 0; i < 100000; ++i) {
    const double x = sample(d, s);
    ASSERT_GE(x, 18.0);
    ASSERT_LE(x, 31.6);
  }
}

TEST(Sample, NormalWithForcedZeroIsTheMean) {
  const auto d = make(Family::kNormal, {22.8, 1.6}, 0, 55);
  RandomStream s(3, 0);
  s.force_uniform(0.5);
  EXPECT_DOUBLE_EQ(sample(d, s), 22.8);
}

TEST(Sample, LognormalMeanMatchesFormula) {
  const auto d = make(Family::kLognormal, {17.0, 1.16, 0.559});
  const double want = 17.0 + std::exp(1.16 + 0.559 * 0.559 / 2);
  EXPECT_NEAR(want, 20.7294, 1e-4);
  const double sd = std::sqrt((std::exp(0.559 * 0.559) - 1) * std::exp(2 * 1.16 + 0.559 * 0.559));
  EXPECT_NEAR(mean_of(d, 100000, 8), want, 4 * sd / std::sqrt(100000.0));
}

TEST(Sample, GammaAndBetaVariateMeans) {
  RandomStream s(10, 0);
  for (double shape : {0.4, 1.0, 2.5, 9.0}) {
    double sum = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) sum += gamma_variate(shape, s);
    EXPECT_NEAR(sum / n, shape, 4 * std::sqrt(shape / n)) << shape;
  }
  for (auto [a, b] : {std::pair{0.5, 0.7}, {2.0, 5.0}, {10.2, 6.35}, {0.8, 3.0}}) {
    double sum = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
      const double x = beta_variate(a, b, s);
      ASSERT_GE(x, 0.0);
      ASSERT_LE(x, 1.0);
      sum += x;
    }
    const double m = a / (a + b), v = a * b / ((a + b) * (a + b) * (a + b + 1));
    EXPECT_NEAR(sum / n, m, 4 * std::sqrt(v / n)) << a << "," << b;
  }
}

TEST(Sample, ClampHoldsForHeavyTail) {
  // Month-5 temperature fit as printed: extremely heavy right tail.
  const auto d = make(Family::kLognormal, {-14.1, 0.0384, 3.86}, 0, 55);
  RandomStream s(5, 0);
  for (int i = 0; i < 10000; ++i) {
    const double x = sample(d, s);
    ASSERT_GE(x, 0.0);
    ASSERT_LE(x, 55.0);
  }
}

TEST(Sample, ConsumptionIndependentOfClampBounds) {
  const auto wide = make(Family::kWeibull, {1930, 4.79, 2700}, 0, 9000);
  const auto narrow = make(Family::kWeibull, {1930, 4.79, 2700}, 4000, 4100);
  RandomStream a(1, 0), b(1, 0);
  for (int i = 0; i < 100; ++i) {
    sample(wide, a);
    sample(narrow, b);
  }
  EXPECT_EQ(a.counter(), b.counter());
}

TEST(Sample, SameSeedSameDraws) {
  const auto d = make(Family::kGamma, {0, 59.1, 1.06});
  RandomStream a(77, 2), b(77, 2);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(sample_unclamped(d, a), sample_unclamped(d, b));
}

TEST(Sample, JohnsonSBMedianIsAtZEqualsDelta) {
  // With Z = 0 forced, X = lower + range / (1 + exp(delta / xi)).
  const auto d = make(Family::kJohnsonSB, {-8480, 16100, -2.87, 1.13});
  RandomStream s(1, 0);
  s.force_uniform(0.5);
  EXPECT_NEAR(sample_unclamped(d, s), -8480 + 16100 / (1 + std::exp(-2.87 / 1.13)), 1e-9);
}

TEST(Sample, LoglogisticMedianIsScale) {
  const auto d = make(Family::kLoglogistic, {0, 12, 61.7});
  RandomStream s(1, 0);
  s.force_uniform(0.5);
  EXPECT_NEAR(sample_unclamped(d, s), 61.7, 1e-12);
}
