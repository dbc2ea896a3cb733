#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace filterlab::kernels {

// Raw-array numeric kernels behind the filter recursion and the distance
// computations. Each operation has a scalar reference implementation; on
// x86-64 an AVX2+FMA variant is selected at startup when the CPU supports it.
// Set FILTERLAB_KERNELS=scalar (or =avx2) to pin the backend.
//
// SIMD variants may reassociate sums, so results can differ from scalar in
// the last bits; the equivalence tests pin that gap to ~1e-12 relative.
struct Backend {
  const char* name;

  double (*sum)(const double* x, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  // out[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* out, std::size_t n);
  // out[i] = x[i] * y[i]; returns sum of out
  double (*mul_sum)(const double* x, const double* y, double* out, std::size_t n);
  double (*abs_diff_sum)(const double* x, const double* y, std::size_t n);
  double (*max_val)(const double* x, std::size_t n);  // requires n >= 1
  void (*scale)(double* x, double a, std::size_t n);
  // out[j] = sum_i w[i] * m[i*cols + j]  (row-vector times row-major matrix)
  void (*vec_mat_mul)(const double* w, const double* m, double* out,
                      std::size_t rows, std::size_t cols);
};

const Backend& scalar_backend();

// nullptr when the binary was built without AVX2 support or the CPU lacks it.
const Backend* avx2_backend();

// The backend every wrapper below routes through. Resolved once.
const Backend& active();

std::vector<std::string> available_backend_names();

inline double sum(const double* x, std::size_t n) { return active().sum(x, n); }
inline double dot(const double* x, const double* y, std::size_t n) {
  return active().dot(x, y, n);
}
inline void axpy(double a, const double* x, double* out, std::size_t n) {
  active().axpy(a, x, out, n);
}
inline double mul_sum(const double* x, const double* y, double* out, std::size_t n) {
  return active().mul_sum(x, y, out, n);
}
inline double abs_diff_sum(const double* x, const double* y, std::size_t n) {
  return active().abs_diff_sum(x, y, n);
}
inline double max_val(const double* x, std::size_t n) { return active().max_val(x, n); }
inline void scale(double* x, double a, std::size_t n) { active().scale(x, a, n); }
inline void vec_mat_mul(const double* w, const double* m, double* out,
                        std::size_t rows, std::size_t cols) {
  active().vec_mat_mul(w, m, out, rows, cols);
}

}  // namespace filterlab::kernels
