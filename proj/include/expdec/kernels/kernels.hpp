#pragma once

#include <cstddef>
#include <cstdint>

// Dense double-precision inner loops used by the solvers and spectral code.
// Scalar reference implementations plus AVX2 variants; the active backend is
// picked once at startup from CPUID and can be overridden for tests.

namespace expdec::kernels {

struct Ops {
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*nrm2sq)(const double* x, std::size_t n);
  void (*axpy)(double a, const double* x, double* y, std::size_t n);  // y += a*x
  void (*scale)(double* x, double a, std::size_t n);
  void (*clip_box)(double* x, double lo, double hi, std::size_t n);
  // dst[i] += src[idx[i]]
  void (*gather_add)(double* dst, const double* src, const std::int32_t* idx, std::size_t n);
  // dst[idx[i]] += src[i]
  void (*scatter_add)(double* dst, const std::int32_t* idx, const double* src, std::size_t n);
  // sum_i w[i] * src[idx[i]]
  double (*gather_dot)(const double* src, const std::int32_t* idx, const double* w, std::size_t n);
  const char* name;
};

const Ops& scalar_ops();
const Ops& avx2_ops();  // falls back to scalar if the TU was built without AVX2
bool avx2_supported();  // runtime CPUID check

// Active backend. "auto" (default) selects AVX2 when supported.
const Ops& ops();
void force_backend(const char* name);  // "auto" | "scalar" | "avx2"

}  // namespace expdec::kernels
