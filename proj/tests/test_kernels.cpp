#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "soilrl/kernels.hpp"
#include "soilrl/rng.hpp"

using namespace soilrl;
using kernels::KernelTable;

namespace {

std::vector<double> randn(std::size_t n, std::uint64_t seed) {
  RandomStream s(seed, 0);
  std::vector<double> v(n);
  for (double& x : v) x = s.standard_normal();
  return v;
}

double max_rel(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::fabs(a[i] - b[i]) / std::max(1.0, std::fabs(b[i])));
  return worst;
}

class SimdEquivalence : public ::testing::TestWithParam<std::tuple<int, int, int>> {
 protected:
  void SetUp() override {
    simd_ = kernels::avx2_table();
    if (!simd_) GTEST_SKIP() << "no AVX2+FMA on this build or CPU";
  }
  const KernelTable& ref_ = kernels::scalar_table();
  const KernelTable* simd_ = nullptr;
};

}  // namespace

TEST_P(SimdEquivalence, AffineForward) {
  const auto [n, in, out] = GetParam();
  const auto w = randn(in * out, 1), b = randn(out, 2), x = randn(n * in, 3);
  std::vector<double> y0(n * out), y1(n * out);
  ref_.affine_forward(w.data(), b.data(), x.data(), y0.data(), n, in, out);
  simd_->affine_forward(w.data(), b.data(), x.data(), y1.data(), n, in, out);
  EXPECT_LT(max_rel(y1, y0), 1e-12);
}

TEST_P(SimdEquivalence, AffineBackwardInput) {
  const auto [n, in, out] = GetParam();
  const auto w = randn(in * out, 4), dy = randn(n * out, 5);
  std::vector<double> d0(n * in), d1(n * in);
  ref_.affine_backward_input(w.data(), dy.data(), d0.data(), n, in, out);
  simd_->affine_backward_input(w.data(), dy.data(), d1.data(), n, in, out);
  EXPECT_LT(max_rel(d1, d0), 1e-12);
}

TEST_P(SimdEquivalence, AffineBackwardParamsAccumulates) {
  const auto [n, in, out] = GetParam();
  const auto x = randn(n * in, 6), dy = randn(n * out, 7);
  auto dw0 = randn(in * out, 8), db0 = randn(out, 9);
  auto dw1 = dw0, db1 = db0;
  ref_.affine_backward_params(x.data(), dy.data(), dw0.data(), db0.data(), n, in, out);
  simd_->affine_backward_params(x.data(), dy.data(), dw1.data(), db1.data(), n, in, out);
  EXPECT_LT(max_rel(dw1, dw0), 1e-12);
  EXPECT_LT(max_rel(db1, db0), 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Shapes, SimdEquivalence,
                         ::testing::Values(std::make_tuple(1, 6, 256), std::make_tuple(7, 256, 2),
                                           std::make_tuple(256, 8, 256), std::make_tuple(5, 256, 256),
                                           std::make_tuple(3, 3, 3), std::make_tuple(13, 17, 19),
                                           std::make_tuple(4, 256, 1)));

TEST(SimdEquivalenceVector, AdamDotAxpby) {
  const KernelTable* simd = kernels::avx2_table();
  if (!simd) GTEST_SKIP() << "no AVX2+FMA";
  const auto& ref = kernels::scalar_table();
  for (std::size_t n : {1u, 3u, 4u, 7u, 8u, 33u, 1000u}) {
    const auto a = randn(n, 10), b = randn(n, 11);
    EXPECT_NEAR(simd->dot(a.data(), b.data(), n), ref.dot(a.data(), b.data(), n), 1e-12 * n);

    auto y0 = b, y1 = b;
    ref.axpby(0.3, a.data(), 0.7, y0.data(), n);
    simd->axpby(0.3, a.data(), 0.7, y1.data(), n);
    EXPECT_LT(max_rel(y1, y0), 1e-15);

    auto p0 = randn(n, 12), p1 = p0;
    std::vector<double> m0(n, 0.1), v0(n, 0.2), m1 = m0, v1 = v0;
    const kernels::AdamCoeffs c{1e-3, 0.9, 0.999, 1e-8, 1 - std::pow(0.9, 3), 1 - std::pow(0.999, 3)};
    ref.adam_update(p0.data(), a.data(), m0.data(), v0.data(), n, c);
    simd->adam_update(p1.data(), a.data(), m1.data(), v1.data(), n, c);
    EXPECT_LT(max_rel(p1, p0), 1e-14);
    EXPECT_LT(max_rel(m1, m0), 1e-15);
    EXPECT_LT(max_rel(v1, v0), 1e-15);
  }
}

TEST(Dispatch, ActiveTableIsOneOfTheVariants) {
  const auto& a = kernels::active();
  EXPECT_TRUE(&a == &kernels::scalar_table() || &a == kernels::avx2_table());
}

TEST(ScalarKernels, AffineForwardMatchesNaiveLoop) {
  const std::size_t n = 3, in = 4, out = 5;
  const auto w = randn(in * out, 1), b = randn(out, 2), x = randn(n * in, 3);
  std::vector<double> y(n * out);
  kernels::scalar_table().affine_forward(w.data(), b.data(), x.data(), y.data(), n, in, out);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t o = 0; o < out; ++o) {
      double acc = b[o];
      for (std::size_t i = 0; i < in; ++i) acc += x[s * in + i] * w[i * out + o];
      EXPECT_NEAR(y[s * out + o], acc, 1e-13);
    }
}
