#include "soilrl/nn.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "soilrl/errors.hpp"
#include "soilrl/kernels.hpp"
#include "soilrl/rng.hpp"
#include "soilrl/text.hpp"

namespace soilrl {

std::string_view activation_name(Activation a) {
  switch (a) {
    case Activation::kLinear:
      return "linear";
    case Activation::kRelu:
      return "relu";
    case Activation::kSoftmax:
      return "softmax";
  }
  return "?";
}

Activation parse_activation(std::string_view s) {
  if (s == "linear") return Activation::kLinear;
  if (s == "relu") return Activation::kRelu;
  if (s == "softmax") return Activation::kSoftmax;
  throw ParseError("unknown activation '" + std::string(s) + "'");
}

DenseNet::DenseNet(std::vector<LayerSpec> layers, std::uint64_t seed) : layers_(std::move(layers)) {
  if (layers_.empty()) throw std::invalid_argument("network needs at least one layer");
  std::size_t total = 0;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& ls = layers_[l];
    if (ls.in == 0 || ls.out == 0) throw std::invalid_argument("layer dims must be positive");
    if (l > 0 && layers_[l - 1].out != ls.in) throw std::invalid_argument("layer dims do not chain");
    if (ls.activation == Activation::kSoftmax && l + 1 != layers_.size())
      throw std::invalid_argument("softmax is only allowed on the final layer");
    offsets_.push_back(total);
    total += ls.in * ls.out + ls.out;
  }
  params_.assign(total, 0.0);
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    RandomStream stream(seed, static_cast<std::uint32_t>(l));
    const double var = (layers_[l].activation == Activation::kRelu ? 2.0 : 1.0) / static_cast<double>(layers_[l].in);
    const double sd = std::sqrt(var);
    for (double& w : weights(l)) w = sd * stream.standard_normal();
  }
}

std::span<double> DenseNet::weights(std::size_t l) {
  return {params_.data() + weight_offset(l), layers_[l].in * layers_[l].out};
}

std::span<double> DenseNet::biases(std::size_t l) { return {params_.data() + bias_offset(l), layers_[l].out}; }

namespace {

void softmax_rows(Matrix& m) {
  for (std::size_t r = 0; r < m.rows; ++r) {
    auto row = m.row(r);
    const double mx = *std::max_element(row.begin(), row.end());
    double sum = 0.0;
    for (double& v : row) {
      v = std::exp(v - mx);
      sum += v;
    }
    for (double& v : row) v /= sum;
  }
}

}  // namespace

void DenseNet::forward(const Matrix& x, ForwardCache& cache) const {
  if (x.cols != input_dim())
    throw std::invalid_argument("input has " + std::to_string(x.cols) + " features, network expects " +
                                std::to_string(input_dim()));
  const auto& k = kernels::active();
  const std::size_t n = x.rows;
  cache.activations.resize(layers_.size() + 1);
  cache.pre.resize(layers_.size());
  cache.activations[0] = x;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& ls = layers_[l];
    Matrix& z = cache.pre[l];
    z.resize(n, ls.out);
    k.affine_forward(params_.data() + weight_offset(l), params_.data() + bias_offset(l),
                     cache.activations[l].data.data(), z.data.data(), n, ls.in, ls.out);
    Matrix& a = cache.activations[l + 1];
    a = z;
    if (ls.activation == Activation::kRelu) {
      for (double& v : a.data) v = v > 0.0 ? v : 0.0;
    } else if (ls.activation == Activation::kSoftmax) {
      softmax_rows(a);
    }
  }
  cache.valid = true;
}

std::vector<double> DenseNet::forward(std::span<const double> x) const {
  Matrix in(1, x.size());
  std::copy(x.begin(), x.end(), in.data.begin());
  ForwardCache cache;
  forward(in, cache);
  return cache.output().data;
}

void DenseNet::backward(const ForwardCache& cache, const Matrix& upstream, OutputGrad kind,
                        std::span<double> grads) const {
  if (!cache.valid || cache.activations.size() != layers_.size() + 1)
    throw StateError("backward() needs the cache of a forward() pass on this network");
  const std::size_t n = cache.activations[0].rows;
  if (upstream.rows != n || upstream.cols != output_dim())
    throw std::invalid_argument("upstream gradient shape does not match the forward batch");
  if (grads.size() != params_.size()) throw std::invalid_argument("gradient buffer has the wrong length");

  const auto& k = kernels::active();
  Matrix delta = upstream;
  Matrix next;
  for (std::size_t l = layers_.size(); l-- > 0;) {
    const auto& ls = layers_[l];
    const bool skip_activation = kind == OutputGrad::kPreActivation && l + 1 == layers_.size();
    if (!skip_activation) {
      if (ls.activation == Activation::kRelu) {
        const Matrix& z = cache.pre[l];
        for (std::size_t i = 0; i < delta.data.size(); ++i)
          if (!(z.data[i] > 0.0)) delta.data[i] = 0.0;
      } else if (ls.activation == Activation::kSoftmax) {
        const Matrix& p = cache.activations[l + 1];
        for (std::size_t r = 0; r < n; ++r) {
          auto g = delta.row(r);
          const auto pr = p.row(r);
          double pg = 0.0;
          for (std::size_t j = 0; j < g.size(); ++j) pg += pr[j] * g[j];
          for (std::size_t j = 0; j < g.size(); ++j) g[j] = pr[j] * (g[j] - pg);
        }
      }
    }
    k.affine_backward_params(cache.activations[l].data.data(), delta.data.data(), grads.data() + weight_offset(l),
                             grads.data() + bias_offset(l), n, ls.in, ls.out);
    if (l > 0) {
      next.resize(n, ls.in);
      k.affine_backward_input(params_.data() + weight_offset(l), delta.data.data(), next.data.data(), n, ls.in,
                              ls.out);
      std::swap(delta, next);
    }
  }
}

AdamOptimizer::AdamOptimizer(std::size_t n, double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps), m_(n, 0.0), v_(n, 0.0) {}

void AdamOptimizer::step(std::span<double> params, std::span<const double> grads) {
  if (params.size() != m_.size() || grads.size() != m_.size())
    throw std::invalid_argument("optimizer state does not match parameter count");
  ++t_;
  const kernels::AdamCoeffs c{lr_,
                              beta1_,
                              beta2_,
                              eps_,
                              1.0 - std::pow(beta1_, static_cast<double>(t_)),
                              1.0 - std::pow(beta2_, static_cast<double>(t_))};
  kernels::active().adam_update(params.data(), grads.data(), m_.data(), v_.data(), params.size(), c);
}

double clip_global_norm(std::span<double> grads, double max_norm) {
  const double norm = std::sqrt(kernels::active().dot(grads.data(), grads.data(), grads.size()));
  if (norm > max_norm && norm > 0.0) {
    const double s = max_norm / norm;
    for (double& g : grads) g *= s;
  }
  return norm;
}

void polyak_update(DenseNet& target, const DenseNet& online, double rate) {
  if (target.parameter_count() != online.parameter_count())
    throw std::invalid_argument("target and online networks differ in shape");
  auto t = target.parameters();
  const auto o = online.parameters();
  kernels::active().axpby(rate, o.data(), 1.0 - rate, t.data(), t.size());
}

void log_softmax(std::span<const double> logits, std::span<double> out) {
  const double mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double z : logits) sum += std::exp(z - mx);
  const double lse = mx + std::log(sum);
  for (std::size_t i = 0; i < logits.size(); ++i) out[i] = logits[i] - lse;
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

std::string format_densenet(const DenseNet& net) {
  std::ostringstream out;
  out << "densenet 1\n" << "layers " << net.layers().size() << '\n';
  for (const auto& l : net.layers()) out << "layer " << l.in << ' ' << l.out << ' ' << activation_name(l.activation) << '\n';
  const auto p = net.parameters();
  std::size_t off = 0;
  for (std::size_t li = 0; li < net.layers().size(); ++li) {
    const auto& l = net.layers()[li];
    out << "weights " << li << '\n';
    for (std::size_t i = 0; i < l.in; ++i) {
      for (std::size_t o = 0; o < l.out; ++o) out << (o ? " " : "") << format_double(p[off++]);
      out << '\n';
    }
    out << "bias " << li << '\n';
    for (std::size_t o = 0; o < l.out; ++o) out << (o ? " " : "") << format_double(p[off++]);
    out << '\n';
  }
  out << "end densenet\n";
  return out.str();
}

namespace {

struct LineReader {
  std::string_view text;
  std::size_t& pos;
  int line = 0;

  std::string_view next() {
    while (pos < text.size()) {
      const auto end = text.find('\n', pos);
      const auto stop = end == std::string_view::npos ? text.size() : end;
      auto l = trim(text.substr(pos, stop - pos));
      pos = stop + (end == std::string_view::npos ? 0 : 1);
      ++line;
      if (!l.empty() && l.front() != '#') return l;
    }
    throw ParseError("unexpected end of network data");
  }

  std::vector<std::string_view> words() {
    std::vector<std::string_view> out;
    for (auto w : split(next(), ' '))
      if (!trim(w).empty()) out.push_back(trim(w));
    return out;
  }
};

std::size_t to_size(std::string_view s) {
  double v = 0;
  if (!parse_double(s, v) || v < 0 || v != static_cast<double>(static_cast<std::size_t>(v)))
    throw ParseError("expected a non-negative integer, got '" + std::string(s) + "'");
  return static_cast<std::size_t>(v);
}

}  // namespace

DenseNet parse_densenet(std::string_view text, std::size_t& pos) {
  LineReader r{text, pos};
  auto w = r.words();
  if (w.size() != 2 || w[0] != "densenet" || w[1] != "1") throw ParseError("expected 'densenet 1' header");
  w = r.words();
  if (w.size() != 2 || w[0] != "layers") throw ParseError("expected 'layers <count>'");
  const std::size_t nl = to_size(w[1]);
  std::vector<LayerSpec> layers;
  for (std::size_t i = 0; i < nl; ++i) {
    w = r.words();
    if (w.size() != 4 || w[0] != "layer") throw ParseError("expected 'layer <in> <out> <activation>'");
    layers.push_back({to_size(w[1]), to_size(w[2]), parse_activation(w[3])});
  }
  DenseNet net(layers, 0);
  auto p = net.parameters();
  std::size_t off = 0;
  auto read_row = [&](std::size_t count) {
    auto vals = r.words();
    if (vals.size() != count)
      throw ParseError("expected " + std::to_string(count) + " values, got " + std::to_string(vals.size()), r.line, 1);
    for (auto v : vals) {
      double d = 0;
      if (!parse_double(v, d)) throw ParseError("invalid number '" + std::string(v) + "'", r.line, 1);
      p[off++] = d;
    }
  };
  for (std::size_t li = 0; li < nl; ++li) {
    w = r.words();
    if (w.size() != 2 || w[0] != "weights" || to_size(w[1]) != li) throw ParseError("expected 'weights " + std::to_string(li) + "'");
    for (std::size_t i = 0; i < layers[li].in; ++i) read_row(layers[li].out);
    w = r.words();
    if (w.size() != 2 || w[0] != "bias" || to_size(w[1]) != li) throw ParseError("expected 'bias " + std::to_string(li) + "'");
    read_row(layers[li].out);
  }
  w = r.words();
  if (w.size() != 2 || w[0] != "end" || w[1] != "densenet") throw ParseError("expected 'end densenet'");
  return net;
}

}  // namespace soilrl
