#pragma once

#include <cstddef>

// Dense-layer and optimizer inner loops. Each kernel has a scalar reference
// implementation and, on x86-64, an AVX2+FMA variant. The active table is
// picked once at first use from CPUID; SOILRL_SIMD=scalar forces the
// reference path. Variants agree to rounding (summation order differs).
//
// Matrix layout: row-major. Weights are stored input-major, W[in x out], so
// the forward pass streams contiguous output rows.

namespace soilrl::kernels {

enum class Isa { kScalar, kAvx2 };

struct AdamCoeffs {
  double lr;
  double beta1;
  double beta2;
  double eps;
  double bias_correction1;  // 1 - beta1^t
  double bias_correction2;  // 1 - beta2^t
};

struct KernelTable {
  Isa isa;
  const char* name;

  // Y[n x out] = X[n x in] * W[in x out] + b
  void (*affine_forward)(const double* w, const double* b, const double* x, double* y, std::size_t n,
                         std::size_t in, std::size_t out);
  // dX[n x in] = dY[n x out] * W^T
  void (*affine_backward_input)(const double* w, const double* dy, double* dx, std::size_t n, std::size_t in,
                                std::size_t out);
  // dW[in x out] += X^T * dY;  db[out] += column sums of dY
  void (*affine_backward_params)(const double* x, const double* dy, double* dw, double* db, std::size_t n,
                                 std::size_t in, std::size_t out);
  // Bias-corrected adaptive-moment step over a flat parameter array.
  void (*adam_update)(double* params, const double* grads, double* m, double* v, std::size_t n,
                      const AdamCoeffs& c);
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y = a * x + b * y
  void (*axpby)(double a, const double* x, double b, double* y, std::size_t n);
};

const KernelTable& scalar_table();
/// nullptr when the build or the CPU lacks AVX2+FMA.
const KernelTable* avx2_table();
/// The dispatched table.
const KernelTable& active();

}  // namespace soilrl::kernels
