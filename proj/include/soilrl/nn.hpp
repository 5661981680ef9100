#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace soilrl {

/// Dense row-major matrix of doubles; rows are samples.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  void resize(std::size_t r, std::size_t c) {
    rows = r;
    cols = c;
    data.assign(r * c, 0.0);
  }
  std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
  std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

enum class Activation { kLinear, kRelu, kSoftmax };

std::string_view activation_name(Activation a);
Activation parse_activation(std::string_view s);

struct LayerSpec {
  std::size_t in = 0;
  std::size_t out = 0;
  Activation activation = Activation::kLinear;

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

/// Activations saved by a batched forward pass for the backward pass.
struct ForwardCache {
  std::vector<Matrix> activations;  // [0] = input, [l + 1] = output of layer l
  std::vector<Matrix> pre;          // pre-activation of layer l
  bool valid = false;

  const Matrix& output() const { return activations.back(); }
  /// Pre-softmax scores of the final layer.
  const Matrix& logits() const { return pre.back(); }
};

/// What the upstream gradient passed to backward() is taken with respect to.
enum class OutputGrad {
  kPostActivation,  // d loss / d output
  kPreActivation,   // d loss / d logits of the final layer (skips its activation)
};

/// Fully connected network. All weights and biases live in one flat array so
/// optimizers, clipping and target averaging work on a single span. Layer l's
/// weights are stored input-major (W[in x out]) followed by its bias.
class DenseNet {
 public:
  DenseNet() = default;
  /// Validates the layer chain (dims chain, softmax last only) and draws
  /// initial weights: normal with variance 2/fan_in for relu layers and
  /// 1/fan_in otherwise; zero biases.
  DenseNet(std::vector<LayerSpec> layers, std::uint64_t seed);

  const std::vector<LayerSpec>& layers() const { return layers_; }
  std::size_t input_dim() const { return layers_.front().in; }
  std::size_t output_dim() const { return layers_.back().out; }
  std::size_t parameter_count() const { return params_.size(); }

  std::span<double> parameters() { return params_; }
  std::span<const double> parameters() const { return params_; }
  std::span<double> weights(std::size_t layer);
  std::span<double> biases(std::size_t layer);

  /// Batched forward pass; fills `cache`. Throws std::invalid_argument on a
  /// dimension mismatch.
  void forward(const Matrix& x, ForwardCache& cache) const;
  /// Single-sample forward without keeping a cache.
  std::vector<double> forward(std::span<const double> x) const;

  /// Accumulates parameter gradients of sum-over-batch loss into `grads`
  /// (length parameter_count()). `upstream` is n x output_dim.
  /// Throws StateError when the cache is missing or does not match.
  void backward(const ForwardCache& cache, const Matrix& upstream, OutputGrad kind, std::span<double> grads) const;

  friend bool operator==(const DenseNet&, const DenseNet&) = default;

 private:
  std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }
  std::size_t bias_offset(std::size_t layer) const { return offsets_[layer] + layers_[layer].in * layers_[layer].out; }

  std::vector<LayerSpec> layers_;
  std::vector<std::size_t> offsets_;
  std::vector<double> params_;
};

/// Adaptive-moment optimizer over a flat parameter array.
class AdamOptimizer {
 public:
  AdamOptimizer() = default;
  AdamOptimizer(std::size_t parameter_count, double learning_rate, double beta1 = 0.9, double beta2 = 0.999,
                double eps = 1e-8);

  void step(std::span<double> params, std::span<const double> grads);

  std::int64_t steps() const { return t_; }
  double learning_rate() const { return lr_; }
  std::span<const double> first_moment() const { return m_; }
  std::span<const double> second_moment() const { return v_; }

 private:
  double lr_ = 1e-3;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-8;
  std::int64_t t_ = 0;
  std::vector<double> m_;
  std::vector<double> v_;
};

/// Scales `grads` so their global L2 norm is at most `max_norm`; returns the
/// norm before scaling.
double clip_global_norm(std::span<double> grads, double max_norm);

/// target <- rate * online + (1 - rate) * target.
void polyak_update(DenseNet& target, const DenseNet& online, double rate);

/// log softmax of one row of scores.
void log_softmax(std::span<const double> logits, std::span<double> out);

bool all_finite(std::span<const double> v);

/// Versioned text format: shapes, activation tags and input-major weight rows
/// in shortest round-trip decimal, so a reload reproduces outputs bit-for-bit.
std::string format_densenet(const DenseNet& net);
/// Parses one network starting at `text`; advances `pos` past it.
DenseNet parse_densenet(std::string_view text, std::size_t& pos);

}  // namespace soilrl
