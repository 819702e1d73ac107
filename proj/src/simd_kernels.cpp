#include "frackpp/simd_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>

namespace frackpp {
namespace {

double s_sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double s_min(const double* x, std::size_t n) {
  double v = x[0];
  for (std::size_t i = 1; i < n; ++i) v = std::min(v, x[i]);
  return v;
}

double s_max(const double* x, std::size_t n) {
  double v = x[0];
  for (std::size_t i = 1; i < n; ++i) v = std::max(v, x[i]);
  return v;
}

void s_axpby(double a, const double* x, double b, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

void s_scale(double* x, double a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void s_pow(const double* x, double m, double* out, std::size_t n) {
  if (m == 1.0) {
    if (out != x) std::memcpy(out, x, n * sizeof(double));
  } else if (m == 2.0) {
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * x[i];
  } else if (m == 3.0) {
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * x[i] * x[i];
  } else if (m == 0.5) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::sqrt(x[i]);
  } else if (m == 1.5) {
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * std::sqrt(x[i]);
  } else {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::pow(x[i], m);
  }
}

double s_clip_floor(double* x, double lo, std::size_t n) {
  double added = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] < lo) {
      added += lo - x[i];
      x[i] = lo;
    }
  }
  return added;
}

double s_clip_ceil(double* x, double hi, std::size_t n) {
  double removed = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] > hi) {
      removed += x[i] - hi;
      x[i] = hi;
    }
  }
  return removed;
}

void s_logistic(double* u, double E, std::size_t n) {
  const double Em1 = E - 1.0;
  for (std::size_t i = 0; i < n; ++i)
    u[i] = u[i] * E / (1.0 + u[i] * Em1);
}

void s_fused(const double* g1, const double* a, const double* g2,
             const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = g1[i] * a[i] - g2[i] * b[i];
}

void s_hadamard(const double* g, const double* a, double* out,
                std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = g[i] * a[i];
}

const PointwiseKernels scalar_table = {
    "scalar", s_sum,       s_min,         s_max,      s_axpby, s_scale,
    s_pow,    s_clip_floor, s_clip_ceil, s_logistic, s_fused, s_hadamard,
};

const PointwiseKernels* pick() {
  const char* force = std::getenv("FRACKPP_SIMD");
  if (force && std::strcmp(force, "scalar") == 0) return &scalar_table;
  if (const PointwiseKernels* v = kernels_avx2()) return v;
  return &scalar_table;
}

}  // namespace

const PointwiseKernels& kernels_scalar() { return scalar_table; }

const PointwiseKernels& kernels() {
  static const PointwiseKernels* chosen = pick();
  return *chosen;
}

}  // namespace frackpp
