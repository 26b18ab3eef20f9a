#include "expdec/kernels/kernels.hpp"

namespace expdec::kernels {

namespace {

double s_dot(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double s_nrm2sq(const double* x, std::size_t n) { return s_dot(x, x, n); }

void s_axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void s_scale(double* x, double a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void s_clip_box(double* x, double lo, double hi, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double v = x[i];
    v = v < lo ? lo : v;
    v = v > hi ? hi : v;
    x[i] = v;
  }
}

void s_gather_add(double* dst, const double* src, const std::int32_t* idx, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += src[idx[i]];
}

void s_scatter_add(double* dst, const std::int32_t* idx, const double* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[idx[i]] += src[i];
}

double s_gather_dot(const double* src, const std::int32_t* idx, const double* w, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += w[i] * src[idx[i]];
  return acc;
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops o{s_dot,        s_nrm2sq,      s_axpy,       s_scale,
                     s_clip_box,   s_gather_add,  s_scatter_add, s_gather_dot,
                     "scalar"};
  return o;
}

}  // namespace expdec::kernels
