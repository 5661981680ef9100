#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "soilrl/rng.hpp"

using namespace soilrl;

TEST(RandomStream, SameSeedAndStreamGiveSameSequence) {
  RandomStream a(42, 3), b(42, 3);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(RandomStream, DistinctStreamsDiffer) {
  RandomStream a(42, 0), b(42, 1);
  int equal = 0;
  for (int i = 0; i < 1000; ++i) equal += a.next_u64() == b.next_u64();
  EXPECT_EQ(equal, 0);
}

TEST(RandomStream, DistinctStreamsAreUncorrelated) {
  RandomStream a(7, 0), b(7, 1);
  const int n = 100000;
  double sab = 0;
  for (int i = 0; i < n; ++i) sab += a.standard_normal() * b.standard_normal();
  // Sample correlation of independent normals has sd 1/sqrt(n).
  EXPECT_LT(std::fabs(sab / n), 4.0 / std::sqrt(n));
}

TEST(RandomStream, StandardNormalMomentsWithinCltBounds) {
  RandomStream s(2024, 0);
  const int n = 100000;
  double sum = 0, sq = 0;
  std::vector<double> x(n);
  for (double& v : x) {
    v = s.standard_normal();
    sum += v;
  }
  const double mean = sum / n;
  for (double v : x) sq += (v - mean) * (v - mean);
  const double var = sq / (n - 1);
  EXPECT_GE(mean, -0.02);
  EXPECT_LE(mean, 0.02);
  EXPECT_GE(var, 0.98);
  EXPECT_LE(var, 1.02);
}

TEST(RandomStream, UniformsStayInRange) {
  RandomStream s(1, 1);
  for (int i = 0; i < 100000; ++i) {
    const double u = s.uniform(), o = s.open_uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_GT(o, 0.0);
    ASSERT_LT(o, 1.0);
  }
}

TEST(RandomStream, CounterCountsEngineDraws) {
  RandomStream s(5, 0);
  s.uniform();
  s.standard_normal();
  s.next_u64();
  EXPECT_EQ(s.counter(), 3u);
}

TEST(RandomStream, ForcedHalfGivesZeroNormal) {
  RandomStream s(5, 0);
  s.force_uniform(0.5);
  EXPECT_DOUBLE_EQ(s.standard_normal(), 0.0);
}

TEST(NormalQuantile, InvertsErfcCdf) {
  for (double p : {1e-12, 1e-6, 0.01, 0.2, 0.5, 0.77, 0.975, 1 - 1e-9}) {
    const double x = normal_quantile(p);
    const double back = 0.5 * std::erfc(-x / std::sqrt(2.0));
    EXPECT_NEAR(back, p, 1e-14 + 1e-12 * p) << p;
  }
}

TEST(DeriveSeed, DependsOnBothInputs) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  EXPECT_EQ(derive_seed(9, 4), derive_seed(9, 4));
}
