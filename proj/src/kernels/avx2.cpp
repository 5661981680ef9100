#include "soilrl/kernels.hpp"

#if defined(__x86_64__) && defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <cmath>

namespace soilrl::kernels {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// Output columns are processed in blocks of 16 with all samples reusing the
// same W[:, block] slice, which stays in L1 for in <= 256.
void affine_forward(const double* w, const double* b, const double* x, double* y, std::size_t n, std::size_t in,
                    std::size_t out) {
  std::size_t o = 0;
  for (; o + 16 <= out; o += 16) {
    for (std::size_t s = 0; s < n; ++s) {
      const double* xs = x + s * in;
      __m256d a0 = _mm256_loadu_pd(b + o);
      __m256d a1 = _mm256_loadu_pd(b + o + 4);
      __m256d a2 = _mm256_loadu_pd(b + o + 8);
      __m256d a3 = _mm256_loadu_pd(b + o + 12);
      for (std::size_t i = 0; i < in; ++i) {
        const __m256d xi = _mm256_broadcast_sd(xs + i);
        const double* wi = w + i * out + o;
        a0 = _mm256_fmadd_pd(xi, _mm256_loadu_pd(wi), a0);
        a1 = _mm256_fmadd_pd(xi, _mm256_loadu_pd(wi + 4), a1);
        a2 = _mm256_fmadd_pd(xi, _mm256_loadu_pd(wi + 8), a2);
        a3 = _mm256_fmadd_pd(xi, _mm256_loadu_pd(wi + 12), a3);
      }
      double* ys = y + s * out + o;
      _mm256_storeu_pd(ys, a0);
      _mm256_storeu_pd(ys + 4, a1);
      _mm256_storeu_pd(ys + 8, a2);
      _mm256_storeu_pd(ys + 12, a3);
    }
  }
  for (; o + 4 <= out; o += 4) {
    for (std::size_t s = 0; s < n; ++s) {
      const double* xs = x + s * in;
      __m256d a = _mm256_loadu_pd(b + o);
      for (std::size_t i = 0; i < in; ++i)
        a = _mm256_fmadd_pd(_mm256_broadcast_sd(xs + i), _mm256_loadu_pd(w + i * out + o), a);
      _mm256_storeu_pd(y + s * out + o, a);
    }
  }
  for (; o < out; ++o) {
    for (std::size_t s = 0; s < n; ++s) {
      const double* xs = x + s * in;
      double a = b[o];
      for (std::size_t i = 0; i < in; ++i) a = std::fma(xs[i], w[i * out + o], a);
      y[s * out + o] = a;
    }
  }
}

inline double dot_avx(const double* a, const double* b, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), s1);
  }
  for (; i + 4 <= n; i += 4) s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
  double acc = hsum(_mm256_add_pd(s0, s1));
  for (; i < n; ++i) acc = std::fma(a[i], b[i], acc);
  return acc;
}

// Four samples share each W row load.
void affine_backward_input(const double* w, const double* dy, double* dx, std::size_t n, std::size_t in,
                           std::size_t out) {
  std::size_t s = 0;
  for (; s + 4 <= n; s += 4) {
    const double* d0 = dy + s * out;
    const double* d1 = d0 + out;
    const double* d2 = d1 + out;
    const double* d3 = d2 + out;
    for (std::size_t i = 0; i < in; ++i) {
      const double* wi = w + i * out;
      __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
      __m256d a2 = _mm256_setzero_pd(), a3 = _mm256_setzero_pd();
      std::size_t o = 0;
      for (; o + 4 <= out; o += 4) {
        const __m256d wv = _mm256_loadu_pd(wi + o);
        a0 = _mm256_fmadd_pd(wv, _mm256_loadu_pd(d0 + o), a0);
        a1 = _mm256_fmadd_pd(wv, _mm256_loadu_pd(d1 + o), a1);
        a2 = _mm256_fmadd_pd(wv, _mm256_loadu_pd(d2 + o), a2);
        a3 = _mm256_fmadd_pd(wv, _mm256_loadu_pd(d3 + o), a3);
      }
      double r0 = hsum(a0), r1 = hsum(a1), r2 = hsum(a2), r3 = hsum(a3);
      for (; o < out; ++o) {
        r0 = std::fma(wi[o], d0[o], r0);
        r1 = std::fma(wi[o], d1[o], r1);
        r2 = std::fma(wi[o], d2[o], r2);
        r3 = std::fma(wi[o], d3[o], r3);
      }
      dx[(s + 0) * in + i] = r0;
      dx[(s + 1) * in + i] = r1;
      dx[(s + 2) * in + i] = r2;
      dx[(s + 3) * in + i] = r3;
    }
  }
  for (; s < n; ++s)
    for (std::size_t i = 0; i < in; ++i) dx[s * in + i] = dot_avx(w + i * out, dy + s * out, out);
}

// dY[:, block] for all samples stays in L1 while each W row block is updated.
void affine_backward_params(const double* x, const double* dy, double* dw, double* db, std::size_t n,
                            std::size_t in, std::size_t out) {
  std::size_t o = 0;
  for (; o + 16 <= out; o += 16) {
    for (std::size_t i = 0; i < in; ++i) {
      double* dwi = dw + i * out + o;
      __m256d a0 = _mm256_loadu_pd(dwi);
      __m256d a1 = _mm256_loadu_pd(dwi + 4);
      __m256d a2 = _mm256_loadu_pd(dwi + 8);
      __m256d a3 = _mm256_loadu_pd(dwi + 12);
      for (std::size_t s = 0; s < n; ++s) {
        const __m256d xs = _mm256_broadcast_sd(x + s * in + i);
        const double* d = dy + s * out + o;
        a0 = _mm256_fmadd_pd(xs, _mm256_loadu_pd(d), a0);
        a1 = _mm256_fmadd_pd(xs, _mm256_loadu_pd(d + 4), a1);
        a2 = _mm256_fmadd_pd(xs, _mm256_loadu_pd(d + 8), a2);
        a3 = _mm256_fmadd_pd(xs, _mm256_loadu_pd(d + 12), a3);
      }
      _mm256_storeu_pd(dwi, a0);
      _mm256_storeu_pd(dwi + 4, a1);
      _mm256_storeu_pd(dwi + 8, a2);
      _mm256_storeu_pd(dwi + 12, a3);
    }
  }
  for (; o + 4 <= out; o += 4) {
    for (std::size_t i = 0; i < in; ++i) {
      __m256d a = _mm256_loadu_pd(dw + i * out + o);
      for (std::size_t s = 0; s < n; ++s)
        a = _mm256_fmadd_pd(_mm256_broadcast_sd(x + s * in + i), _mm256_loadu_pd(dy + s * out + o), a);
      _mm256_storeu_pd(dw + i * out + o, a);
    }
  }
  for (; o < out; ++o)
    for (std::size_t i = 0; i < in; ++i) {
      double a = dw[i * out + o];
      for (std::size_t s = 0; s < n; ++s) a = std::fma(x[s * in + i], dy[s * out + o], a);
      dw[i * out + o] = a;
    }

  o = 0;
  for (; o + 4 <= out; o += 4) {
    __m256d a = _mm256_loadu_pd(db + o);
    for (std::size_t s = 0; s < n; ++s) a = _mm256_add_pd(a, _mm256_loadu_pd(dy + s * out + o));
    _mm256_storeu_pd(db + o, a);
  }
  for (; o < out; ++o)
    for (std::size_t s = 0; s < n; ++s) db[o] += dy[s * out + o];
}

void adam_update(double* p, const double* g, double* m, double* v, std::size_t n, const AdamCoeffs& c) {
  const __m256d b1 = _mm256_set1_pd(c.beta1), nb1 = _mm256_set1_pd(1.0 - c.beta1);
  const __m256d b2 = _mm256_set1_pd(c.beta2), nb2 = _mm256_set1_pd(1.0 - c.beta2);
  const __m256d inv_bc1 = _mm256_set1_pd(1.0 / c.bias_correction1);
  const __m256d inv_bc2 = _mm256_set1_pd(1.0 / c.bias_correction2);
  const __m256d lr = _mm256_set1_pd(c.lr), eps = _mm256_set1_pd(c.eps);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d gv = _mm256_loadu_pd(g + i);
    const __m256d mv = _mm256_fmadd_pd(b1, _mm256_loadu_pd(m + i), _mm256_mul_pd(nb1, gv));
    const __m256d vv = _mm256_fmadd_pd(b2, _mm256_loadu_pd(v + i), _mm256_mul_pd(nb2, _mm256_mul_pd(gv, gv)));
    _mm256_storeu_pd(m + i, mv);
    _mm256_storeu_pd(v + i, vv);
    const __m256d denom = _mm256_add_pd(_mm256_sqrt_pd(_mm256_mul_pd(vv, inv_bc2)), eps);
    const __m256d step = _mm256_div_pd(_mm256_mul_pd(lr, _mm256_mul_pd(mv, inv_bc1)), denom);
    _mm256_storeu_pd(p + i, _mm256_sub_pd(_mm256_loadu_pd(p + i), step));
  }
  for (; i < n; ++i) {
    m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g[i];
    v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g[i] * g[i];
    p[i] -= c.lr * (m[i] / c.bias_correction1) / (std::sqrt(v[i] / c.bias_correction2) + c.eps);
  }
}

void axpby(double a, const double* x, double b, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a), bv = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_mul_pd(bv, _mm256_loadu_pd(y + i))));
  for (; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable table{Isa::kAvx2, "avx2",      affine_forward, affine_backward_input,
                                 affine_backward_params, adam_update,    dot_avx,
                                 axpby};
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &table : nullptr;
}

}  // namespace soilrl::kernels

#else

namespace soilrl::kernels {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace soilrl::kernels

#endif
