#include <cmath>

#include "soilrl/kernels.hpp"

namespace soilrl::kernels {
namespace {

void affine_forward(const double* w, const double* b, const double* x, double* y, std::size_t n, std::size_t in,
                    std::size_t out) {
  for (std::size_t s = 0; s < n; ++s) {
    double* ys = y + s * out;
    const double* xs = x + s * in;
    for (std::size_t o = 0; o < out; ++o) ys[o] = b[o];
    for (std::size_t i = 0; i < in; ++i) {
      const double xi = xs[i];
      const double* wi = w + i * out;
      for (std::size_t o = 0; o < out; ++o) ys[o] += xi * wi[o];
    }
  }
}

void affine_backward_input(const double* w, const double* dy, double* dx, std::size_t n, std::size_t in,
                           std::size_t out) {
  for (std::size_t s = 0; s < n; ++s) {
    const double* dys = dy + s * out;
    for (std::size_t i = 0; i < in; ++i) {
      const double* wi = w + i * out;
      double acc = 0.0;
      for (std::size_t o = 0; o < out; ++o) acc += wi[o] * dys[o];
      dx[s * in + i] = acc;
    }
  }
}

void affine_backward_params(const double* x, const double* dy, double* dw, double* db, std::size_t n,
                            std::size_t in, std::size_t out) {
  for (std::size_t s = 0; s < n; ++s) {
    const double* xs = x + s * in;
    const double* dys = dy + s * out;
    for (std::size_t i = 0; i < in; ++i) {
      const double xi = xs[i];
      double* dwi = dw + i * out;
      for (std::size_t o = 0; o < out; ++o) dwi[o] += xi * dys[o];
    }
    for (std::size_t o = 0; o < out; ++o) db[o] += dys[o];
  }
}

void adam_update(double* p, const double* g, double* m, double* v, std::size_t n, const AdamCoeffs& c) {
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g[i];
    v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g[i] * g[i];
    const double mhat = m[i] / c.bias_correction1;
    const double vhat = v[i] / c.bias_correction2;
    p[i] -= c.lr * mhat / (std::sqrt(vhat) + c.eps);
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpby(double a, const double* x, double b, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{Isa::kScalar, "scalar",   affine_forward, affine_backward_input,
                                 affine_backward_params,   adam_update,    dot,
                                 axpby};
  return table;
}

}  // namespace soilrl::kernels
