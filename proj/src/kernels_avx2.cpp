#include <cstddef>

#include "filterlab/kernels.hpp"

// AVX2+FMA variants. This translation unit is the only one compiled with
// -mavx2 -mfma; nothing here runs unless the dispatcher verified CPU support.

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace filterlab::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_max_sd(lo, swapped));
}

double v_sum(const double* x, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    a0 = _mm256_add_pd(a0, _mm256_loadu_pd(x + i));
    a1 = _mm256_add_pd(a1, _mm256_loadu_pd(x + i + 4));
  }
  for (; i + 4 <= n; i += 4) a0 = _mm256_add_pd(a0, _mm256_loadu_pd(x + i));
  double acc = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) acc += x[i];
  return acc;
}

double v_dot(const double* x, const double* y, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
    a1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), a1);
  }
  for (; i + 4 <= n; i += 4)
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
  double acc = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void v_axpy(double a, const double* x, double* out, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d o = _mm256_loadu_pd(out + i);
    o = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), o);
    _mm256_storeu_pd(out + i, o);
  }
  for (; i < n; ++i) out[i] += a * x[i];
}

double v_mul_sum(const double* x, const double* y, double* out, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d p = _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(out + i, p);
    acc = _mm256_add_pd(acc, p);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    out[i] = x[i] * y[i];
    s += out[i];
  }
  return s;
}

double v_abs_diff_sum(const double* x, const double* y, std::size_t n) {
  // clear the sign bit instead of calling fabs lane-wise
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    acc = _mm256_add_pd(acc, _mm256_andnot_pd(sign_mask, d));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += std::fabs(x[i] - y[i]);
  return s;
}

double v_max_val(const double* x, std::size_t n) {
  if (n < 4) {
    double m = x[0];
    for (std::size_t i = 1; i < n; ++i) m = std::max(m, x[i]);
    return m;
  }
  __m256d acc = _mm256_loadu_pd(x);
  std::size_t i = 4;
  for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, _mm256_loadu_pd(x + i));
  double m = hmax(acc);
  for (; i < n; ++i) m = std::max(m, x[i]);
  return m;
}

void v_scale(double* x, double a, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] *= a;
}

void v_vec_mat_mul(const double* w, const double* m, double* out,
                   std::size_t rows, std::size_t cols) {
  std::fill(out, out + cols, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    const double wi = w[i];
    if (wi == 0.0) continue;
    const __m256d vw = _mm256_set1_pd(wi);
    const double* row = m + i * cols;
    std::size_t j = 0;
    for (; j + 8 <= cols; j += 8) {
      __m256d o0 = _mm256_loadu_pd(out + j);
      __m256d o1 = _mm256_loadu_pd(out + j + 4);
      o0 = _mm256_fmadd_pd(vw, _mm256_loadu_pd(row + j), o0);
      o1 = _mm256_fmadd_pd(vw, _mm256_loadu_pd(row + j + 4), o1);
      _mm256_storeu_pd(out + j, o0);
      _mm256_storeu_pd(out + j + 4, o1);
    }
    for (; j + 4 <= cols; j += 4) {
      __m256d o = _mm256_loadu_pd(out + j);
      o = _mm256_fmadd_pd(vw, _mm256_loadu_pd(row + j), o);
      _mm256_storeu_pd(out + j, o);
    }
    for (; j < cols; ++j) out[j] += wi * row[j];
  }
}

}  // namespace

const Backend* detail_avx2_backend_if_compiled() {
  static const Backend backend = {
      "avx2",  v_sum,     v_dot,    v_axpy, v_mul_sum,
      v_abs_diff_sum, v_max_val, v_scale, v_vec_mat_mul,
  };
  return &backend;
}

}  // namespace filterlab::kernels

#else  // built without AVX2

namespace filterlab::kernels {

const Backend* detail_avx2_backend_if_compiled() { return nullptr; }

}  // namespace filterlab::kernels

#endif
