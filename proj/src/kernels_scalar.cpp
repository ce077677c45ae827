#include <cmath>

#include "pwl/kernels.hpp"

namespace pwl::kernels {
namespace {

template <typename T>
void linear_forward_impl(const T* x, const T* w, const T* bias, T* y, int batch, int in_dim,
                         int out_dim) {
  for (int b = 0; b < batch; ++b) {
    const T* xb = x + static_cast<std::size_t>(b) * in_dim;
    T* yb = y + static_cast<std::size_t>(b) * out_dim;
    for (int n = 0; n < out_dim; ++n) {
      const T* wn = w + static_cast<std::size_t>(n) * in_dim;
      T acc = bias ? bias[n] : T(0);
      for (int k = 0; k < in_dim; ++k) acc += xb[k] * wn[k];
      yb[n] = acc;
    }
  }
}

template <typename T>
void linear_backward_input_impl(const T* dy, const T* w, T* dx, int batch, int in_dim,
                                int out_dim) {
  for (int b = 0; b < batch; ++b) {
    const T* dyb = dy + static_cast<std::size_t>(b) * out_dim;
    T* dxb = dx + static_cast<std::size_t>(b) * in_dim;
    for (int k = 0; k < in_dim; ++k) dxb[k] = T(0);
    for (int n = 0; n < out_dim; ++n) {
      const T g = dyb[n];
      const T* wn = w + static_cast<std::size_t>(n) * in_dim;
      for (int k = 0; k < in_dim; ++k) dxb[k] += g * wn[k];
    }
  }
}

template <typename T>
void linear_backward_params_impl(const T* dy, const T* x, T* dw, T* db, int batch, int in_dim,
                                 int out_dim, int n0, int n1) {
  for (int n = n0; n < n1; ++n) {
    T* dwn = dw + static_cast<std::size_t>(n) * in_dim;
    T dbn = T(0);
    for (int b = 0; b < batch; ++b) {
      const T g = dy[static_cast<std::size_t>(b) * out_dim + n];
      dbn += g;
      const T* xb = x + static_cast<std::size_t>(b) * in_dim;
      for (int k = 0; k < in_dim; ++k) dwn[k] += g * xb[k];
    }
    if (db) db[n] += dbn;
  }
}

template <typename T>
void elu_impl(const T* x, T* y, int n) {
  for (int i = 0; i < n; ++i) y[i] = x[i] > T(0) ? x[i] : std::expm1(x[i]);
}

template <typename T>
void elu_backward_impl(const T* a, const T* dy, T* dx, int n) {
  for (int i = 0; i < n; ++i) dx[i] = dy[i] * (a[i] > T(0) ? T(1) : a[i] + T(1));
}

float dot_impl(const float* a, const float* b, int n) {
  float acc = 0.0f;
  for (int i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_impl(float alpha, const float* x, float* y, int n) {
  for (int i = 0; i < n; ++i) y[i] += alpha * x[i];
}

float sum_sq_impl(const float* a, int n) {
  float acc = 0.0f;
  for (int i = 0; i < n; ++i) acc += a[i] * a[i];
  return acc;
}

}  // namespace

namespace detail {
const Table& scalar_table() {
  static const Table t{
      &linear_forward_impl<float>,  &linear_backward_input_impl<float>,
      &linear_backward_params_impl<float>, &elu_impl<float>, &elu_backward_impl<float>,
      &dot_impl, &axpy_impl, &sum_sq_impl,
  };
  return t;
}
}  // namespace detail

void linear_forward_f64(const double* x, const double* w, const double* bias, double* y,
                        int batch, int in_dim, int out_dim) {
  linear_forward_impl(x, w, bias, y, batch, in_dim, out_dim);
}
void linear_backward_input_f64(const double* dy, const double* w, double* dx, int batch,
                               int in_dim, int out_dim) {
  linear_backward_input_impl(dy, w, dx, batch, in_dim, out_dim);
}
void linear_backward_params_f64(const double* dy, const double* x, double* dw, double* db,
                                int batch, int in_dim, int out_dim, int n0, int n1) {
  linear_backward_params_impl(dy, x, dw, db, batch, in_dim, out_dim, n0, n1);
}
void elu_f64(const double* x, double* y, int n) { elu_impl(x, y, n); }
void elu_backward_f64(const double* a, const double* dy, double* dx, int n) {
  elu_backward_impl(a, dy, dx, n);
}

}  // namespace pwl::kernels
