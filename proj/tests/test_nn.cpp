#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "soilrl/errors.hpp"
#include "soilrl/nn.hpp"
#include "soilrl/rng.hpp"

using namespace soilrl;

namespace {

DenseNet actor(std::uint64_t seed = 1) {
  return DenseNet({{6, 256, Activation::kRelu}, {256, 2, Activation::kSoftmax}}, seed);
}

Matrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  RandomStream s(seed, 0);
  Matrix m(r, c);
  for (double& v : m.data) v = s.standard_normal();
  return m;
}

// Max relative error of backward() against central differences of
// L = sum(c * output) over `samples` random parameters.
double gradient_error(DenseNet net, std::uint64_t seed, int samples = 100) {
  RandomStream s(seed, 1);
  for (std::size_t l = 0; l < net.layers().size(); ++l)
    for (double& b : net.biases(l)) b = 0.1 * s.standard_normal();
  const Matrix x = random_matrix(4, net.input_dim(), seed + 1);
  const Matrix c = random_matrix(4, net.output_dim(), seed + 2);
  auto loss = [&] {
    ForwardCache k;
    net.forward(x, k);
    return std::inner_product(c.data.begin(), c.data.end(), k.output().data.begin(), 0.0);
  };
  ForwardCache cache;
  net.forward(x, cache);
  std::vector<double> g(net.parameter_count());
  net.backward(cache, c, OutputGrad::kPostActivation, g);
  auto p = net.parameters();
  double worst = 0;
  for (int k = 0; k < samples; ++k) {
    const std::size_t i = s.next_u64() % p.size();
    const double saved = p[i], h = 1e-6;
    p[i] = saved + h;
    const double up = loss();
    p[i] = saved - h;
    const double down = loss();
    p[i] = saved;
    const double num = (up - down) / (2 * h);
    worst = std::max(worst, std::fabs(num - g[i]) / std::max({std::fabs(num), std::fabs(g[i]), 1e-6}));
  }
  return worst;
}

}  // namespace

TEST(DenseNet, ZeroWeightsSoftmaxIsUniform) {
  DenseNet net = actor();
  for (double& p : net.parameters()) p = 0;
  const auto y = net.forward(std::vector<double>(6, 0.3));
  EXPECT_DOUBLE_EQ(y[0], 0.5);
  EXPECT_DOUBLE_EQ(y[1], 0.5);
}

TEST(DenseNet, IdentityLinearLayer) {
  DenseNet net({{3, 3, Activation::kLinear}}, 1);
  auto w = net.weights(0);
  std::fill(w.begin(), w.end(), 0.0);
  for (int i = 0; i < 3; ++i) w[i * 3 + i] = 1.0;
  std::fill(net.biases(0).begin(), net.biases(0).end(), 0.0);
  const std::vector<double> x{1.5, -2.0, 0.25};
  EXPECT_EQ(net.forward(x), x);
}

TEST(DenseNet, SoftmaxOutputsAreDistributions) {
  const DenseNet net = actor(5);
  ForwardCache cache;
  net.forward(random_matrix(200, 6, 3), cache);
  for (std::size_t r = 0; r < 200; ++r) {
    const auto p = cache.output().row(r);
    EXPECT_GT(p[0], 0.0);
    EXPECT_GT(p[1], 0.0);
    EXPECT_NEAR(p[0] + p[1], 1.0, 1e-12);
  }
}

TEST(DenseNet, ShapeValidation) {
  EXPECT_THROW(DenseNet({{6, 4, Activation::kRelu}, {5, 2, Activation::kLinear}}, 1), std::invalid_argument);
  EXPECT_THROW(DenseNet({{6, 4, Activation::kSoftmax}, {4, 2, Activation::kLinear}}, 1), std::invalid_argument);
  const DenseNet net = actor();
  EXPECT_THROW(net.forward(std::vector<double>(5, 0.0)), std::invalid_argument);
}

TEST(DenseNet, ParameterCount) {
  EXPECT_EQ(actor().parameter_count(), 6u * 256 + 256 + 256 * 2 + 2);
}

TEST(DenseNet, InitializationScale) {
  const DenseNet net({{400, 300, Activation::kRelu}, {300, 1, Activation::kLinear}}, 9);
  auto w = const_cast<DenseNet&>(net).weights(0);
  double ss = 0;
  for (double v : w) ss += v * v;
  EXPECT_NEAR(ss / w.size(), 2.0 / 400, 0.05 * 2.0 / 400);
  for (double b : const_cast<DenseNet&>(net).biases(0)) EXPECT_EQ(b, 0.0);
}

TEST(Backward, MissingCacheThrows) {
  const DenseNet net = actor();
  ForwardCache empty;
  Matrix up(1, 2);
  std::vector<double> g(net.parameter_count());
  EXPECT_THROW(net.backward(empty, up, OutputGrad::kPostActivation, g), StateError);
}

TEST(Backward, ZeroUpstreamGivesZeroGradient) {
  const DenseNet net = actor();
  ForwardCache cache;
  net.forward(random_matrix(3, 6, 1), cache);
  std::vector<double> g(net.parameter_count(), 0.0);
  net.backward(cache, Matrix(3, 2), OutputGrad::kPostActivation, g);
  for (double v : g) ASSERT_EQ(v, 0.0);
}

TEST(Backward, DeadReluUnitPassesNoGradient) {
  DenseNet net({{2, 2, Activation::kRelu}, {2, 1, Activation::kLinear}}, 1);
  auto b = net.biases(0);
  b[0] = -100.0;  // unit 0 is dead for small inputs
  b[1] = 0.5;
  Matrix x(1, 2);
  x.data = {0.1, -0.2};
  ForwardCache cache;
  net.forward(x, cache);
  Matrix up(1, 1);
  up.data = {1.0};
  std::vector<double> g(net.parameter_count(), 0.0);
  net.backward(cache, up, OutputGrad::kPostActivation, g);
  // First-layer weights feeding unit 0 (column 0) and its bias.
  EXPECT_EQ(g[0 * 2 + 0], 0.0);
  EXPECT_EQ(g[1 * 2 + 0], 0.0);
  EXPECT_EQ(g[4 + 0], 0.0);
  EXPECT_NE(g[4 + 1], 0.0);
}

TEST(Backward, MatchesCentralDifferencesOnAllArchitectures) {
  EXPECT_LE(gradient_error(actor(2), 10), 1e-4);
  EXPECT_LE(gradient_error(DenseNet({{6, 256, Activation::kRelu}, {256, 1, Activation::kLinear}}, 3), 11), 1e-4);
  EXPECT_LE(gradient_error(DenseNet({{6, 256, Activation::kRelu},
                                     {256, 256, Activation::kRelu},
                                     {256, 2, Activation::kSoftmax}},
                                    4),
                           12),
            1e-4);
  EXPECT_LE(gradient_error(DenseNet({{8, 256, Activation::kRelu},
                                     {256, 256, Activation::kRelu},
                                     {256, 1, Activation::kLinear}},
                                    5),
                           13),
            1e-4);
}

TEST(Backward, PreActivationGradientSkipsSoftmax) {
  // d/dz of sum(c * softmax(z)) via the softmax Jacobian equals passing
  // p * (c - p.c) as a logits gradient.
  const DenseNet net = actor(7);
  const Matrix x = random_matrix(5, 6, 2);
  const Matrix c = random_matrix(5, 2, 3);
  ForwardCache cache;
  net.forward(x, cache);
  Matrix dz(5, 2);
  for (std::size_t r = 0; r < 5; ++r) {
    const auto p = cache.output().row(r);
    const double pc = p[0] * c(r, 0) + p[1] * c(r, 1);
    for (int j = 0; j < 2; ++j) dz(r, j) = p[j] * (c(r, j) - pc);
  }
  std::vector<double> g1(net.parameter_count()), g2(net.parameter_count());
  net.backward(cache, c, OutputGrad::kPostActivation, g1);
  net.backward(cache, dz, OutputGrad::kPreActivation, g2);
  for (std::size_t i = 0; i < g1.size(); ++i) ASSERT_NEAR(g1[i], g2[i], 1e-14);
}

TEST(Adam, ZeroGradientLeavesParameters) {
  DenseNet net = actor();
  const std::vector<double> before(net.parameters().begin(), net.parameters().end());
  AdamOptimizer opt(net.parameter_count(), 1e-3);
  std::vector<double> g(net.parameter_count(), 0.0);
  for (int i = 0; i < 10; ++i) opt.step(net.parameters(), g);
  EXPECT_TRUE(std::equal(before.begin(), before.end(), net.parameters().begin()));
}

TEST(Adam, ConstantGradientStepApproachesLearningRate) {
  std::vector<double> p{0.0, 0.0}, g{0.3, -2.0};
  AdamOptimizer opt(2, 0.01);
  double last0 = 0, last1 = 0;
  for (int t = 0; t < 5000; ++t) {
    last0 = p[0];
    last1 = p[1];
    opt.step(p, g);
  }
  EXPECT_NEAR(last0 - p[0], 0.01, 1e-6);
  EXPECT_NEAR(p[1] - last1, 0.01, 1e-6);
}

TEST(Adam, FirstStepIsLearningRateTimesSign) {
  std::vector<double> p{1.0}, g{5.0};
  AdamOptimizer opt(1, 0.1);
  opt.step(p, g);
  EXPECT_NEAR(p[0], 1.0 - 0.1, 1e-8);
}

TEST(Adam, DeterministicAcrossRuns) {
  auto run = [] {
    DenseNet net = actor(3);
    AdamOptimizer opt(net.parameter_count(), 1e-3);
    RandomStream s(1, 0);
    std::vector<double> g(net.parameter_count());
    for (int i = 0; i < 5; ++i) {
      for (double& v : g) v = s.standard_normal();
      opt.step(net.parameters(), g);
    }
    return net;
  };
  EXPECT_TRUE(run() == run());
}

TEST(Adam, RandomStepsStayFinite) {
  DenseNet net({{6, 32, Activation::kRelu}, {32, 2, Activation::kSoftmax}}, 2);
  AdamOptimizer opt(net.parameter_count(), 5e-4);
  RandomStream s(4, 0);
  std::vector<double> g(net.parameter_count());
  ForwardCache cache;
  for (int i = 0; i < 10000; ++i) {
    const Matrix x = random_matrix(4, 6, 1000 + i);
    net.forward(x, cache);
    Matrix up(4, 2);
    for (double& v : up.data) v = 10 * s.standard_normal();
    std::fill(g.begin(), g.end(), 0.0);
    net.backward(cache, up, OutputGrad::kPreActivation, g);
    clip_global_norm(g, 0.5);
    opt.step(net.parameters(), g);
  }
  EXPECT_TRUE(all_finite(net.parameters()));
}

TEST(ClipGlobalNorm, ScalesOnlyWhenAbove) {
  std::vector<double> g{3.0, 4.0};
  EXPECT_DOUBLE_EQ(clip_global_norm(g, 10.0), 5.0);
  EXPECT_EQ(g[0], 3.0);
  clip_global_norm(g, 0.5);
  EXPECT_NEAR(std::hypot(g[0], g[1]), 0.5, 1e-15);
}

TEST(Polyak, RateOneCopiesOnline) {
  DenseNet target = actor(1);
  const DenseNet online = actor(2);
  polyak_update(target, online, 1.0);
  EXPECT_TRUE(target == online);
}

TEST(Polyak, ConvergesGeometrically) {
  DenseNet target = actor(1);
  const DenseNet online = actor(2);
  auto gap = [&] {
    double m = 0;
    for (std::size_t i = 0; i < target.parameter_count(); ++i)
      m = std::max(m, std::fabs(target.parameters()[i] - online.parameters()[i]));
    return m;
  };
  const double g0 = gap();
  for (int k = 0; k < 200; ++k) polyak_update(target, online, 0.005);
  EXPECT_NEAR(gap() / g0, std::pow(1 - 0.005, 200), 1e-9);
}

TEST(Serialization, ReloadIsBitExact) {
  DenseNet net({{6, 256, Activation::kRelu}, {256, 256, Activation::kRelu}, {256, 2, Activation::kSoftmax}}, 8);
  RandomStream s(2, 0);
  for (double& b : net.biases(1)) b = s.standard_normal() * 1e-7;
  const std::string text = format_densenet(net);
  std::size_t pos = 0;
  const DenseNet back = parse_densenet(text, pos);
  EXPECT_EQ(pos, text.size());
  EXPECT_TRUE(back == net);
  const std::vector<double> x{0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  EXPECT_EQ(back.forward(x), net.forward(x));
}

TEST(Serialization, RejectsTruncatedInput) {
  const std::string text = format_densenet(actor());
  std::size_t pos = 0;
  EXPECT_THROW(parse_densenet(text.substr(0, text.size() / 2), pos), ParseError);
}

TEST(LogSoftmax, MatchesLogOfSoftmax) {
  const std::vector<double> z{1000.0, 998.5};
  double out[2];
  log_softmax(z, out);
  EXPECT_NEAR(std::exp(out[0]) + std::exp(out[1]), 1.0, 1e-13);
  EXPECT_NEAR(out[0] - out[1], 1.5, 1e-12);
}
