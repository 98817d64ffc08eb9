#include "sldskit/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace sldskit::kernels {
namespace {

std::atomic<const KernelTable*> g_active{nullptr};

const KernelTable* resolve_auto() {
#if defined(__x86_64__) || defined(_M_X64)
  if (const char* env = std::getenv("SLDSKIT_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return &scalar_table;
    if (std::strcmp(env, "avx2") == 0) return &avx2_table;
    // anything else (including "auto") falls through to detection
  }
  if (avx2_supported()) return &avx2_table;
#endif
  return &scalar_table;
}

}  // namespace

bool avx2_supported() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& active() {
  const KernelTable* t = g_active.load(std::memory_order_acquire);
  if (t == nullptr) {
    t = resolve_auto();
    g_active.store(t, std::memory_order_release);
  }
  return *t;
}

void force_backend(Backend b) {
  switch (b) {
    case Backend::Auto:
      g_active.store(resolve_auto(), std::memory_order_release);
      return;
    case Backend::Scalar:
      g_active.store(&scalar_table, std::memory_order_release);
      return;
    case Backend::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
      if (avx2_supported()) {
        g_active.store(&avx2_table, std::memory_order_release);
        return;
      }
#endif
      throw std::invalid_argument("AVX2 kernels not supported on this CPU");
  }
  throw std::invalid_argument("unknown kernel backend");
}

}  // namespace sldskit::kernels
