#include <algorithm>
#include <cmath>
#include <cstddef>

#include "filterlab/kernels.hpp"

// Reference implementations. Plain sequential loops, no reassociation:
// these define the semantics the SIMD variants are tested against.

namespace filterlab::kernels {
namespace {

double s_sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double s_dot(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void s_axpy(double a, const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] += a * x[i];
}

double s_mul_sum(const double* x, const double* y, double* out, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = x[i] * y[i];
    acc += out[i];
  }
  return acc;
}

double s_abs_diff_sum(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::fabs(x[i] - y[i]);
  return acc;
}

double s_max_val(const double* x, std::size_t n) {
  double m = x[0];
  for (std::size_t i = 1; i < n; ++i) m = std::max(m, x[i]);
  return m;
}

void s_scale(double* x, double a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void s_vec_mat_mul(const double* w, const double* m, double* out,
                   std::size_t rows, std::size_t cols) {
  std::fill(out, out + cols, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    const double wi = w[i];
    if (wi == 0.0) continue;
    const double* row = m + i * cols;
    for (std::size_t j = 0; j < cols; ++j) out[j] += wi * row[j];
  }
}

}  // namespace

const Backend& scalar_backend() {
  static const Backend backend = {
      "scalar", s_sum,     s_dot,     s_axpy, s_mul_sum,
      s_abs_diff_sum, s_max_val, s_scale, s_vec_mat_mul,
  };
  return backend;
}

}  // namespace filterlab::kernels
