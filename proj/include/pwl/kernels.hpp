#pragma once

#include <cstddef>

// Data-parallel arithmetic kernels behind the dense-layer math and the hot
// elementwise ops. Every kernel has a scalar reference implementation and an
// AVX2 variant; the active variant is chosen at runtime (cpuid, overridable
// via PWL_KERNELS=scalar|avx2|auto or set_backend). Scalar and AVX2 variants
// are equivalence-tested against each other.
//
// Conventions: all matrices are dense row-major. Reductions inside one output
// element run in a fixed order per backend, so results are bitwise
// reproducible for a given backend regardless of how callers partition work.
namespace pwl::kernels {

enum class Backend { scalar, avx2 };

Backend detect_backend();       // best supported by this CPU (and env override)
Backend active_backend();
void set_backend(Backend b);    // throws if unsupported on this CPU
const char* backend_name(Backend b);

// y[b,n] = sum_k x[b,k] * w[n,k] + bias[n]         (bias may be null)
void linear_forward_f32(const float* x, const float* w, const float* bias, float* y,
                        int batch, int in_dim, int out_dim);

// dx[b,k] = sum_n dy[b,n] * w[n,k]
void linear_backward_input_f32(const float* dy, const float* w, float* dx,
                               int batch, int in_dim, int out_dim);

// For out rows n in [n0,n1):
//   dw[n,k] += sum_b dy[b,n] * x[b,k];   db[n] += sum_b dy[b,n]  (db may be null)
void linear_backward_params_f32(const float* dy, const float* x, float* dw, float* db,
                                int batch, int in_dim, int out_dim, int n0, int n1);

// ELU (alpha = 1): y = x > 0 ? x : expm1(x)
void elu_f32(const float* x, float* y, int n);
// dx = dy * (a > 0 ? 1 : a + 1), with a the ELU output (post-activation)
void elu_backward_f32(const float* a, const float* dy, float* dx, int n);

float dot_f32(const float* a, const float* b, int n);
void axpy_f32(float alpha, const float* x, float* y, int n);
float sum_sq_f32(const float* a, int n);

// Double-precision reference path (used by the 64-bit gradient checks);
// scalar only, identical on every backend.
void linear_forward_f64(const double* x, const double* w, const double* bias, double* y,
                        int batch, int in_dim, int out_dim);
void linear_backward_input_f64(const double* dy, const double* w, double* dx,
                               int batch, int in_dim, int out_dim);
void linear_backward_params_f64(const double* dy, const double* x, double* dw, double* db,
                                int batch, int in_dim, int out_dim, int n0, int n1);
void elu_f64(const double* x, double* y, int n);
void elu_backward_f64(const double* a, const double* dy, double* dx, int n);

// Implementation tables (internal; exposed for the equivalence tests).
namespace detail {
struct Table {
  void (*linear_forward_f32)(const float*, const float*, const float*, float*, int, int, int);
  void (*linear_backward_input_f32)(const float*, const float*, float*, int, int, int);
  void (*linear_backward_params_f32)(const float*, const float*, float*, float*, int, int, int,
                                     int, int);
  void (*elu_f32)(const float*, float*, int);
  void (*elu_backward_f32)(const float*, const float*, float*, int);
  float (*dot_f32)(const float*, const float*, int);
  void (*axpy_f32)(float, const float*, float*, int);
  float (*sum_sq_f32)(const float*, int);
};
const Table& scalar_table();
#if defined(__x86_64__) || defined(_M_X64)
const Table& avx2_table();
#endif
}  // namespace detail

}  // namespace pwl::kernels
