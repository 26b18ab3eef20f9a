#include "expdec/kernels/kernels.hpp"

#include <atomic>
#include <cstring>

#if defined(__x86_64__) || defined(_M_X64)
#include <cpuid.h>
#endif

namespace expdec::kernels {

bool avx2_supported() {
#if defined(EXPDEC_HAVE_AVX2_TU) && defined(__x86_64__)
  unsigned eax, ebx, ecx, edx;
  if (!__get_cpuid_count(7, 0, &eax, &ebx, &ecx, &edx)) return false;
  return (ebx & (1u << 5)) != 0;  // AVX2 bit
#else
  return false;
#endif
}

namespace {
std::atomic<const Ops*> g_active{nullptr};

const Ops* resolve_auto() { return avx2_supported() ? &avx2_ops() : &scalar_ops(); }
}  // namespace

const Ops& ops() {
  const Ops* p = g_active.load(std::memory_order_acquire);
  if (!p) {
    p = resolve_auto();
    g_active.store(p, std::memory_order_release);
  }
  return *p;
}

void force_backend(const char* name) {
  if (std::strcmp(name, "scalar") == 0)
    g_active.store(&scalar_ops(), std::memory_order_release);
  else if (std::strcmp(name, "avx2") == 0)
    g_active.store(&avx2_ops(), std::memory_order_release);
  else
    g_active.store(resolve_auto(), std::memory_order_release);
}

}  // namespace expdec::kernels
