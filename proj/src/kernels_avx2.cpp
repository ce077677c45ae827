// AVX2+FMA kernel variants. This TU is the only one compiled with -mavx2; it
// is reached through the runtime dispatch table after a cpuid check.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

#include "pwl/kernels.hpp"

namespace pwl::kernels {
namespace {

inline float hsum8(__m256 v) {
  __m128 lo = _mm256_castps256_ps128(v);
  __m128 hi = _mm256_extractf128_ps(v, 1);
  __m128 s = _mm_add_ps(lo, hi);
  s = _mm_add_ps(s, _mm_movehl_ps(s, s));
  s = _mm_add_ss(s, _mm_shuffle_ps(s, s, 1));
  return _mm_cvtss_f32(s);
}

// Reduce 8 accumulators to one vector [sum(a0) .. sum(a7)].
inline __m256 hsum8x8(__m256 a0, __m256 a1, __m256 a2, __m256 a3, __m256 a4, __m256 a5,
                      __m256 a6, __m256 a7) {
  __m256 h01 = _mm256_hadd_ps(a0, a1);
  __m256 h23 = _mm256_hadd_ps(a2, a3);
  __m256 h45 = _mm256_hadd_ps(a4, a5);
  __m256 h67 = _mm256_hadd_ps(a6, a7);
  __m256 q0123 = _mm256_hadd_ps(h01, h23);  // per lane: [s0 s1 s2 s3]
  __m256 q4567 = _mm256_hadd_ps(h45, h67);
  __m128 s03 = _mm_add_ps(_mm256_castps256_ps128(q0123), _mm256_extractf128_ps(q0123, 1));
  __m128 s47 = _mm_add_ps(_mm256_castps256_ps128(q4567), _mm256_extractf128_ps(q4567, 1));
  return _mm256_set_m128(s47, s03);
}

void linear_forward(const float* x, const float* w, const float* bias, float* y, int batch,
                    int in_dim, int out_dim) {
  const int kv = in_dim & ~7;
  for (int b = 0; b < batch; ++b) {
    const float* xb = x + static_cast<std::size_t>(b) * in_dim;
    float* yb = y + static_cast<std::size_t>(b) * out_dim;
    int n = 0;
    for (; n + 8 <= out_dim; n += 8) {
      const float* w0 = w + static_cast<std::size_t>(n) * in_dim;
      __m256 a0 = _mm256_setzero_ps(), a1 = a0, a2 = a0, a3 = a0;
      __m256 a4 = a0, a5 = a0, a6 = a0, a7 = a0;
      for (int k = 0; k < kv; k += 8) {
        const __m256 xv = _mm256_loadu_ps(xb + k);
        a0 = _mm256_fmadd_ps(xv, _mm256_loadu_ps(w0 + k), a0);
        a1 = _mm256_fmadd_ps(xv, _mm256_loadu_ps(w0 + in_dim + k), a1);
        a2 = _mm256_fmadd_ps(xv, _mm256_loadu_ps(w0 + 2 * in_dim + k), a2);
        a3 = _mm256_fmadd_ps(xv, _mm256_loadu_ps(w0 + 3 * in_dim + k), a3);
        a4 = _mm256_fmadd_ps(xv, _mm256_loadu_ps(w0 + 4 * in_dim + k), a4);
        a5 = _mm256_fmadd_ps(xv, _mm256_loadu_ps(w0 + 5 * in_dim + k), a5);
        a6 = _mm256_fmadd_ps(xv, _mm256_loadu_ps(w0 + 6 * in_dim + k), a6);
        a7 = _mm256_fmadd_ps(xv, _mm256_loadu_ps(w0 + 7 * in_dim + k), a7);
      }
      __m256 sums = hsum8x8(a0, a1, a2, a3, a4, a5, a6, a7);
      if (bias) sums = _mm256_add_ps(sums, _mm256_loadu_ps(bias + n));
      alignas(32) float s[8];
      _mm256_store_ps(s, sums);
      for (int j = 0; j < 8; ++j) {
        float acc = s[j];
        const float* wr = w0 + static_cast<std::size_t>(j) * in_dim;
        for (int k = kv; k < in_dim; ++k) acc += xb[k] * wr[k];
        yb[n + j] = acc;
      }
    }
    for (; n < out_dim; ++n) {
      const float* wn = w + static_cast<std::size_t>(n) * in_dim;
      __m256 acc = _mm256_setzero_ps();
      for (int k = 0; k < kv; k += 8)
        acc = _mm256_fmadd_ps(_mm256_loadu_ps(xb + k), _mm256_loadu_ps(wn + k), acc);
      float a = hsum8(acc);
      for (int k = kv; k < in_dim; ++k) a += xb[k] * wn[k];
      yb[n] = a + (bias ? bias[n] : 0.0f);
    }
  }
}

void linear_backward_input(const float* dy, const float* w, float* dx, int batch, int in_dim,
                           int out_dim) {
  const int kv = in_dim & ~7;
  for (int b = 0; b < batch; ++b) {
    const float* dyb = dy + static_cast<std::size_t>(b) * out_dim;
    float* dxb = dx + static_cast<std::size_t>(b) * in_dim;
    for (int k = 0; k < in_dim; ++k) dxb[k] = 0.0f;
    int n = 0;
    for (; n + 4 <= out_dim; n += 4) {
      const __m256 g0 = _mm256_broadcast_ss(dyb + n);
      const __m256 g1 = _mm256_broadcast_ss(dyb + n + 1);
      const __m256 g2 = _mm256_broadcast_ss(dyb + n + 2);
      const __m256 g3 = _mm256_broadcast_ss(dyb + n + 3);
      const float* w0 = w + static_cast<std::size_t>(n) * in_dim;
      for (int k = 0; k < kv; k += 8) {
        __m256 acc = _mm256_loadu_ps(dxb + k);
        acc = _mm256_fmadd_ps(g0, _mm256_loadu_ps(w0 + k), acc);
        acc = _mm256_fmadd_ps(g1, _mm256_loadu_ps(w0 + in_dim + k), acc);
        acc = _mm256_fmadd_ps(g2, _mm256_loadu_ps(w0 + 2 * in_dim + k), acc);
        acc = _mm256_fmadd_ps(g3, _mm256_loadu_ps(w0 + 3 * in_dim + k), acc);
        _mm256_storeu_ps(dxb + k, acc);
      }
      for (int k = kv; k < in_dim; ++k) {
        dxb[k] += dyb[n] * w0[k] + dyb[n + 1] * w0[in_dim + k] + dyb[n + 2] * w0[2 * in_dim + k] +
                  dyb[n + 3] * w0[3 * in_dim + k];
      }
    }
    for (; n < out_dim; ++n) {
      const float g = dyb[n];
      const float* wn = w + static_cast<std::size_t>(n) * in_dim;
      const __m256 gv = _mm256_set1_ps(g);
      for (int k = 0; k < kv; k += 8) {
        __m256 acc = _mm256_loadu_ps(dxb + k);
        acc = _mm256_fmadd_ps(gv, _mm256_loadu_ps(wn + k), acc);
        _mm256_storeu_ps(dxb + k, acc);
      }
      for (int k = kv; k < in_dim; ++k) dxb[k] += g * wn[k];
    }
  }
}

void linear_backward_params(const float* dy, const float* x, float* dw, float* db, int batch,
                            int in_dim, int out_dim, int n0, int n1) {
  constexpr int kBBlock = 256;
  const int kv = in_dim & ~7;
  for (int bb = 0; bb < batch; bb += kBBlock) {
    const int be = batch < bb + kBBlock ? batch : bb + kBBlock;
    int n = n0;
    for (; n + 8 <= n1; n += 8) {
      float* dw0 = dw + static_cast<std::size_t>(n) * in_dim;
      for (int k = 0; k < kv; k += 8) {
        __m256 a0 = _mm256_loadu_ps(dw0 + k);
        __m256 a1 = _mm256_loadu_ps(dw0 + in_dim + k);
        __m256 a2 = _mm256_loadu_ps(dw0 + 2 * in_dim + k);
        __m256 a3 = _mm256_loadu_ps(dw0 + 3 * in_dim + k);
        __m256 a4 = _mm256_loadu_ps(dw0 + 4 * in_dim + k);
        __m256 a5 = _mm256_loadu_ps(dw0 + 5 * in_dim + k);
        __m256 a6 = _mm256_loadu_ps(dw0 + 6 * in_dim + k);
        __m256 a7 = _mm256_loadu_ps(dw0 + 7 * in_dim + k);
        for (int b = bb; b < be; ++b) {
          const __m256 xv = _mm256_loadu_ps(x + static_cast<std::size_t>(b) * in_dim + k);
          const float* g = dy + static_cast<std::size_t>(b) * out_dim + n;
          a0 = _mm256_fmadd_ps(_mm256_broadcast_ss(g), xv, a0);
          a1 = _mm256_fmadd_ps(_mm256_broadcast_ss(g + 1), xv, a1);
          a2 = _mm256_fmadd_ps(_mm256_broadcast_ss(g + 2), xv, a2);
          a3 = _mm256_fmadd_ps(_mm256_broadcast_ss(g + 3), xv, a3);
          a4 = _mm256_fmadd_ps(_mm256_broadcast_ss(g + 4), xv, a4);
          a5 = _mm256_fmadd_ps(_mm256_broadcast_ss(g + 5), xv, a5);
          a6 = _mm256_fmadd_ps(_mm256_broadcast_ss(g + 6), xv, a6);
          a7 = _mm256_fmadd_ps(_mm256_broadcast_ss(g + 7), xv, a7);
        }
        _mm256_storeu_ps(dw0 + k, a0);
        _mm256_storeu_ps(dw0 + in_dim + k, a1);
        _mm256_storeu_ps(dw0 + 2 * in_dim + k, a2);
        _mm256_storeu_ps(dw0 + 3 * in_dim + k, a3);
        _mm256_storeu_ps(dw0 + 4 * in_dim + k, a4);
        _mm256_storeu_ps(dw0 + 5 * in_dim + k, a5);
        _mm256_storeu_ps(dw0 + 6 * in_dim + k, a6);
        _mm256_storeu_ps(dw0 + 7 * in_dim + k, a7);
      }
      // k tail + bias for this 8-row block
      for (int j = 0; j < 8; ++j) {
        float* dwr = dw0 + static_cast<std::size_t>(j) * in_dim;
        float dbn = 0.0f;
        for (int b = bb; b < be; ++b) {
          const float g = dy[static_cast<std::size_t>(b) * out_dim + n + j];
          dbn += g;
          const float* xb = x + static_cast<std::size_t>(b) * in_dim;
          for (int k = kv; k < in_dim; ++k) dwr[k] += g * xb[k];
        }
        if (db) db[n + j] += dbn;
      }
    }
    for (; n < n1; ++n) {
      float* dwn = dw + static_cast<std::size_t>(n) * in_dim;
      float dbn = 0.0f;
      for (int b = bb; b < be; ++b) {
        const float g = dy[static_cast<std::size_t>(b) * out_dim + n];
        dbn += g;
        const float* xb = x + static_cast<std::size_t>(b) * in_dim;
        const __m256 gv = _mm256_set1_ps(g);
        for (int k = 0; k < kv; k += 8) {
          __m256 acc = _mm256_loadu_ps(dwn + k);
          acc = _mm256_fmadd_ps(gv, _mm256_loadu_ps(xb + k), acc);
          _mm256_storeu_ps(dwn + k, acc);
        }
        for (int k = kv; k < in_dim; ++k) dwn[k] += g * xb[k];
      }
      if (db) db[n] += dbn;
    }
  }
}

void elu(const float* x, float* y, int n) {
  const __m256 zero = _mm256_setzero_ps();
  int i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 xv = _mm256_loadu_ps(x + i);
    const __m256 pos = _mm256_cmp_ps(xv, zero, _CMP_GT_OQ);
    const int mask = _mm256_movemask_ps(pos);
    if (mask == 0xff) {
      _mm256_storeu_ps(y + i, xv);
    } else {
      // scalar expm1 on non-positive lanes keeps results bitwise identical
      // to the scalar backend
      for (int j = 0; j < 8; ++j) {
        const float v = x[i + j];
        y[i + j] = v > 0.0f ? v : std::expm1(v);
      }
    }
  }
  for (; i < n; ++i) y[i] = x[i] > 0.0f ? x[i] : std::expm1(x[i]);
}

void elu_backward(const float* a, const float* dy, float* dx, int n) {
  const __m256 zero = _mm256_setzero_ps();
  const __m256 one = _mm256_set1_ps(1.0f);
  int i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 av = _mm256_loadu_ps(a + i);
    const __m256 pos = _mm256_cmp_ps(av, zero, _CMP_GT_OQ);
    const __m256 factor = _mm256_blendv_ps(_mm256_add_ps(av, one), one, pos);
    _mm256_storeu_ps(dx + i, _mm256_mul_ps(_mm256_loadu_ps(dy + i), factor));
  }
  for (; i < n; ++i) dx[i] = dy[i] * (a[i] > 0.0f ? 1.0f : a[i] + 1.0f);
}

float dot(const float* a, const float* b, int n) {
  __m256 acc0 = _mm256_setzero_ps();
  __m256 acc1 = _mm256_setzero_ps();
  int i = 0;
  for (; i + 16 <= n; i += 16) {
    acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc0);
    acc1 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i + 8), _mm256_loadu_ps(b + i + 8), acc1);
  }
  for (; i + 8 <= n; i += 8)
    acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc0);
  float s = hsum8(_mm256_add_ps(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(float alpha, const float* x, float* y, int n) {
  const __m256 av = _mm256_set1_ps(alpha);
  int i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 acc = _mm256_loadu_ps(y + i);
    acc = _mm256_fmadd_ps(av, _mm256_loadu_ps(x + i), acc);
    _mm256_storeu_ps(y + i, acc);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

float sum_sq(const float* a, int n) {
  __m256 acc0 = _mm256_setzero_ps();
  __m256 acc1 = _mm256_setzero_ps();
  int i = 0;
  for (; i + 16 <= n; i += 16) {
    const __m256 v0 = _mm256_loadu_ps(a + i);
    const __m256 v1 = _mm256_loadu_ps(a + i + 8);
    acc0 = _mm256_fmadd_ps(v0, v0, acc0);
    acc1 = _mm256_fmadd_ps(v1, v1, acc1);
  }
  for (; i + 8 <= n; i += 8) {
    const __m256 v = _mm256_loadu_ps(a + i);
    acc0 = _mm256_fmadd_ps(v, v, acc0);
  }
  float s = hsum8(_mm256_add_ps(acc0, acc1));
  for (; i < n; ++i) s += a[i] * a[i];
  return s;
}

}  // namespace

namespace detail {
const Table& avx2_table() {
  static const Table t{
      &linear_forward, &linear_backward_input, &linear_backward_params,
      &elu,            &elu_backward,          &dot,
      &axpy,           &sum_sq,
  };
  return t;
}
}  // namespace detail

}  // namespace pwl::kernels

#endif  // x86_64
