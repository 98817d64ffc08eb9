#include "sldskit/kernels.hpp"

#include <algorithm>

// Reference kernels. This translation unit is compiled with
// -ffp-contract=off so the scalar path is plain IEEE mul/add with a fixed
// accumulation order (ascending k) that the SIMD variants mirror.

namespace sldskit::kernels {
namespace {

void matmul_scalar(double* c, const double* a, const double* b,
                   std::size_t n, std::size_t k, std::size_t m) {
  std::fill(c, c + n * m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double* ci = c + i * m;
    const double* ai = a + i * k;
    for (std::size_t kk = 0; kk < k; ++kk) {
      const double aik = ai[kk];
      if (aik == 0.0) continue;
      const double* bk = b + kk * m;
      for (std::size_t j = 0; j < m; ++j) ci[j] += aik * bk[j];
    }
  }
}

void matmul_nt_scalar(double* c, const double* a, const double* b,
                      std::size_t n, std::size_t k, std::size_t m) {
  for (std::size_t i = 0; i < n; ++i) {
    const double* ai = a + i * k;
    for (std::size_t j = 0; j < m; ++j) {
      const double* bj = b + j * k;
      double acc = 0.0;
      for (std::size_t kk = 0; kk < k; ++kk) acc += ai[kk] * bj[kk];
      c[i * m + j] = acc;
    }
  }
}

void matvec_scalar(double* y, const double* a, const double* x,
                   std::size_t n, std::size_t m) {
  for (std::size_t i = 0; i < n; ++i) {
    const double* ai = a + i * m;
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) acc += ai[j] * x[j];
    y[i] = acc;
  }
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double sum_sq_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

void axpy_scalar(double* y, double alpha, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

const KernelTable scalar_table = {
    matmul_scalar, matmul_nt_scalar, matvec_scalar,
    dot_scalar,    sum_sq_scalar,    axpy_scalar,
    "scalar",
};

}  // namespace sldskit::kernels
