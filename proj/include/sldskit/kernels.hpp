#ifndef SLDSKIT_KERNELS_HPP
#define SLDSKIT_KERNELS_HPP

#include <cstddef>

// Dense double-precision kernels used by the matrix layer. Every kernel has
// a scalar reference implementation and, on x86-64 with AVX2+FMA, a SIMD
// variant selected once at runtime. The two paths are equivalence-tested
// against forward-error bounds (see tests/test_kernels.cpp); within one
// process the selected backend never changes unless forced, so results are
// reproducible for a fixed seed and backend.

namespace sldskit::kernels {

enum class Backend {
  Auto,    // pick the best supported backend (env SLDSKIT_KERNELS overrides)
  Scalar,  // strict IEEE mul/add reference
  Avx2,    // AVX2 + FMA, x86-64 only
};

struct KernelTable {
  // c[n x m] = a[n x k] * b[k x m], row-major, c overwritten
  void (*matmul)(double* c, const double* a, const double* b,
                 std::size_t n, std::size_t k, std::size_t m);
  // c[n x m] = a[n x k] * b[m x k]^T
  void (*matmul_nt)(double* c, const double* a, const double* b,
                    std::size_t n, std::size_t k, std::size_t m);
  // y[n] = a[n x m] * x[m]
  void (*matvec)(double* y, const double* a, const double* x,
                 std::size_t n, std::size_t m);
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*sum_sq)(const double* x, std::size_t n);
  // y += alpha * x
  void (*axpy)(double* y, double alpha, const double* x, std::size_t n);
  const char* name;
};

extern const KernelTable scalar_table;
#if defined(__x86_64__) || defined(_M_X64)
extern const KernelTable avx2_table;
#endif

// Table in effect. First call resolves Backend::Auto from CPU features and
// the SLDSKIT_KERNELS environment variable ("scalar", "avx2", "auto").
const KernelTable& active();

// Override the dispatch decision (tests, diagnostics). Throws
// std::invalid_argument when the requested backend is unsupported here.
void force_backend(Backend b);

bool avx2_supported();

}  // namespace sldskit::kernels

#endif  // SLDSKIT_KERNELS_HPP
