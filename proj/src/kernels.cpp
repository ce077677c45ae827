#include "pwl/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace pwl::kernels {
namespace {

bool cpu_has_avx2() {
#if (defined(__x86_64__) || defined(_M_X64)) && defined(PWL_HAVE_AVX2_TU)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const detail::Table* table_for(Backend b) {
#if (defined(__x86_64__) || defined(_M_X64)) && defined(PWL_HAVE_AVX2_TU)
  if (b == Backend::avx2) return &detail::avx2_table();
#endif
  (void)b;
  return &detail::scalar_table();
}

struct State {
  Backend backend;
  const detail::Table* table;
  State() {
    backend = cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
    if (const char* env = std::getenv("PWL_KERNELS")) {
      if (std::strcmp(env, "scalar") == 0) backend = Backend::scalar;
      else if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) backend = Backend::avx2;
      // "auto" or anything else keeps the detected backend
    }
    table = table_for(backend);
  }
};

State& state() {
  static State s;
  return s;
}

}  // namespace

Backend detect_backend() { return cpu_has_avx2() ? Backend::avx2 : Backend::scalar; }

Backend active_backend() { return state().backend; }

void set_backend(Backend b) {
  if (b == Backend::avx2 && !cpu_has_avx2())
    throw std::runtime_error("kernels: avx2 backend not supported on this CPU/build");
  state().backend = b;
  state().table = table_for(b);
}

const char* backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

void linear_forward_f32(const float* x, const float* w, const float* bias, float* y, int batch,
                        int in_dim, int out_dim) {
  state().table->linear_forward_f32(x, w, bias, y, batch, in_dim, out_dim);
}
void linear_backward_input_f32(const float* dy, const float* w, float* dx, int batch, int in_dim,
                               int out_dim) {
  state().table->linear_backward_input_f32(dy, w, dx, batch, in_dim, out_dim);
}
void linear_backward_params_f32(const float* dy, const float* x, float* dw, float* db, int batch,
                                int in_dim, int out_dim, int n0, int n1) {
  state().table->linear_backward_params_f32(dy, x, dw, db, batch, in_dim, out_dim, n0, n1);
}
void elu_f32(const float* x, float* y, int n) { state().table->elu_f32(x, y, n); }
void elu_backward_f32(const float* a, const float* dy, float* dx, int n) {
  state().table->elu_backward_f32(a, dy, dx, n);
}
float dot_f32(const float* a, const float* b, int n) { return state().table->dot_f32(a, b, n); }
void axpy_f32(float alpha, const float* x, float* y, int n) {
  state().table->axpy_f32(alpha, x, y, n);
}
float sum_sq_f32(const float* a, int n) { return state().table->sum_sq_f32(a, n); }

}  // namespace pwl::kernels
