#include "expdec/kernels/kernels.hpp"

#if defined(EXPDEC_HAVE_AVX2_TU) && (defined(__x86_64__) || defined(_M_X64))
#include <immintrin.h>

namespace expdec::kernels {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

double v_dot(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double v_nrm2sq(const double* x, std::size_t n) { return v_dot(x, x, n); }

void v_axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void v_scale(double* x, double a, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] *= a;
}

void v_clip_box(double* x, double lo, double hi, std::size_t n) {
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d vhi = _mm256_set1_pd(hi);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    v = _mm256_min_pd(_mm256_max_pd(v, vlo), vhi);
    _mm256_storeu_pd(x + i, v);
  }
  for (; i < n; ++i) {
    double v = x[i];
    v = v < lo ? lo : v;
    x[i] = v > hi ? hi : v;
  }
}

void v_gather_add(double* dst, const double* src, const std::int32_t* idx, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m128i vi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + i));
    __m256d g = _mm256_i32gather_pd(src, vi, 8);
    _mm256_storeu_pd(dst + i, _mm256_add_pd(_mm256_loadu_pd(dst + i), g));
  }
  for (; i < n; ++i) dst[i] += src[idx[i]];
}

void v_scatter_add(double* dst, const std::int32_t* idx, const double* src, std::size_t n) {
  // no scatter instruction in AVX2; plain loop, unrolled a little
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    dst[idx[i]] += src[i];
    dst[idx[i + 1]] += src[i + 1];
    dst[idx[i + 2]] += src[i + 2];
    dst[idx[i + 3]] += src[i + 3];
  }
  for (; i < n; ++i) dst[idx[i]] += src[i];
}

double v_gather_dot(const double* src, const std::int32_t* idx, const double* w, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m128i vi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + i));
    __m256d g = _mm256_i32gather_pd(src, vi, 8);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), g, acc);
  }
  double r = hsum(acc);
  for (; i < n; ++i) r += w[i] * src[idx[i]];
  return r;
}

}  // namespace

const Ops& avx2_ops() {
  static const Ops o{v_dot,      v_nrm2sq,     v_axpy,        v_scale,
                     v_clip_box, v_gather_add, v_scatter_add, v_gather_dot,
                     "avx2"};
  return o;
}

}  // namespace expdec::kernels

#else

namespace expdec::kernels {
const Ops& avx2_ops() { return scalar_ops(); }
}  // namespace expdec::kernels

#endif
