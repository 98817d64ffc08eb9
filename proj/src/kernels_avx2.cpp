#include "sldskit/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <algorithm>
#include <cmath>

// AVX2+FMA variants. Loop structure mirrors the scalar kernels (k ascending
// per output element) so the only difference is FMA rounding and, for the
// reductions, lane-wise partial sums.

namespace sldskit::kernels {
namespace {

void matmul_avx2(double* c, const double* a, const double* b,
                 std::size_t n, std::size_t k, std::size_t m) {
  std::fill(c, c + n * m, 0.0);
  const std::size_t m4 = m & ~std::size_t{3};
  for (std::size_t i = 0; i < n; ++i) {
    double* ci = c + i * m;
    const double* ai = a + i * k;
    for (std::size_t kk = 0; kk < k; ++kk) {
      const double aik = ai[kk];
      if (aik == 0.0) continue;
      const double* bk = b + kk * m;
      const __m256d va = _mm256_set1_pd(aik);
      std::size_t j = 0;
      for (; j < m4; j += 4) {
        __m256d vc = _mm256_loadu_pd(ci + j);
        vc = _mm256_fmadd_pd(va, _mm256_loadu_pd(bk + j), vc);
        _mm256_storeu_pd(ci + j, vc);
      }
      for (; j < m; ++j) ci[j] = std::fma(aik, bk[j], ci[j]);
    }
  }
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  const std::size_t n4 = n & ~std::size_t{3};
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i < n4; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double tail = 0.0;
  for (; i < n; ++i) tail = std::fma(x[i], y[i], tail);
  return ((lanes[0] + lanes[1]) + (lanes[2] + lanes[3])) + tail;
}

void matmul_nt_avx2(double* c, const double* a, const double* b,
                    std::size_t n, std::size_t k, std::size_t m) {
  for (std::size_t i = 0; i < n; ++i) {
    const double* ai = a + i * k;
    for (std::size_t j = 0; j < m; ++j) c[i * m + j] = dot_avx2(ai, b + j * k, k);
  }
}

void matvec_avx2(double* y, const double* a, const double* x,
                 std::size_t n, std::size_t m) {
  for (std::size_t i = 0; i < n; ++i) y[i] = dot_avx2(a + i * m, x, m);
}

double sum_sq_avx2(const double* x, std::size_t n) { return dot_avx2(x, x, n); }

void axpy_avx2(double* y, double alpha, const double* x, std::size_t n) {
  const std::size_t n4 = n & ~std::size_t{3};
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i < n4; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] = std::fma(alpha, x[i], y[i]);
}

}  // namespace

const KernelTable avx2_table = {
    matmul_avx2, matmul_nt_avx2, matvec_avx2,
    dot_avx2,    sum_sq_avx2,    axpy_avx2,
    "avx2",
};

}  // namespace sldskit::kernels

#endif  // x86-64
