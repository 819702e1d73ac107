#include "frackpp/simd_kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <cmath>
#include <cstring>

namespace frackpp {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double v_sum(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double r = hsum(acc);
  for (; i < n; ++i) r += x[i];
  return r;
}

double v_min(const double* x, std::size_t n) {
  std::size_t i = 0;
  double r = x[0];
  if (n >= 4) {
    __m256d acc = _mm256_loadu_pd(x);
    for (i = 4; i + 4 <= n; i += 4)
      acc = _mm256_min_pd(acc, _mm256_loadu_pd(x + i));
    __m128d lo = _mm_min_pd(_mm256_castpd256_pd128(acc),
                            _mm256_extractf128_pd(acc, 1));
    r = _mm_cvtsd_f64(_mm_min_sd(lo, _mm_unpackhi_pd(lo, lo)));
  }
  for (; i < n; ++i) r = r < x[i] ? r : x[i];
  return r;
}

double v_max(const double* x, std::size_t n) {
  std::size_t i = 0;
  double r = x[0];
  if (n >= 4) {
    __m256d acc = _mm256_loadu_pd(x);
    for (i = 4; i + 4 <= n; i += 4)
      acc = _mm256_max_pd(acc, _mm256_loadu_pd(x + i));
    __m128d lo = _mm_max_pd(_mm256_castpd256_pd128(acc),
                            _mm256_extractf128_pd(acc, 1));
    r = _mm_cvtsd_f64(_mm_max_sd(lo, _mm_unpackhi_pd(lo, lo)));
  }
  for (; i < n; ++i) r = r > x[i] ? r : x[i];
  return r;
}

void v_axpby(double a, const double* x, double b, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a), vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d r = _mm256_mul_pd(vb, _mm256_loadu_pd(y + i));
    r = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), r);
    _mm256_storeu_pd(y + i, r);
  }
  for (; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

void v_scale(double* x, double a, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] *= a;
}

void v_pow(const double* x, double m, double* out, std::size_t n) {
  std::size_t i = 0;
  if (m == 1.0) {
    if (out != x) std::memcpy(out, x, n * sizeof(double));
    return;
  }
  if (m == 2.0) {
    for (; i + 4 <= n; i += 4) {
      __m256d v = _mm256_loadu_pd(x + i);
      _mm256_storeu_pd(out + i, _mm256_mul_pd(v, v));
    }
    for (; i < n; ++i) out[i] = x[i] * x[i];
  } else if (m == 3.0) {
    for (; i + 4 <= n; i += 4) {
      __m256d v = _mm256_loadu_pd(x + i);
      _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_mul_pd(v, v), v));
    }
    for (; i < n; ++i) out[i] = x[i] * x[i] * x[i];
  } else if (m == 0.5) {
    for (; i + 4 <= n; i += 4)
      _mm256_storeu_pd(out + i, _mm256_sqrt_pd(_mm256_loadu_pd(x + i)));
    for (; i < n; ++i) out[i] = std::sqrt(x[i]);
  } else if (m == 1.5) {
    for (; i + 4 <= n; i += 4) {
      __m256d v = _mm256_loadu_pd(x + i);
      _mm256_storeu_pd(out + i, _mm256_mul_pd(v, _mm256_sqrt_pd(v)));
    }
    for (; i < n; ++i) out[i] = x[i] * std::sqrt(x[i]);
  } else {
    // No vector pow in the instruction set; keep libm semantics.
    for (; i < n; ++i) out[i] = std::pow(x[i], m);
  }
}

double v_clip_floor(double* x, double lo, std::size_t n) {
  const __m256d vlo = _mm256_set1_pd(lo);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    __m256d c = _mm256_max_pd(v, vlo);
    acc = _mm256_add_pd(acc, _mm256_sub_pd(c, v));
    _mm256_storeu_pd(x + i, c);
  }
  double added = hsum(acc);
  for (; i < n; ++i) {
    if (x[i] < lo) {
      added += lo - x[i];
      x[i] = lo;
    }
  }
  return added;
}

double v_clip_ceil(double* x, double hi, std::size_t n) {
  const __m256d vhi = _mm256_set1_pd(hi);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    __m256d c = _mm256_min_pd(v, vhi);
    acc = _mm256_add_pd(acc, _mm256_sub_pd(v, c));
    _mm256_storeu_pd(x + i, c);
  }
  double removed = hsum(acc);
  for (; i < n; ++i) {
    if (x[i] > hi) {
      removed += x[i] - hi;
      x[i] = hi;
    }
  }
  return removed;
}

void v_logistic(double* u, double E, std::size_t n) {
  const __m256d vE = _mm256_set1_pd(E);
  const __m256d vEm1 = _mm256_set1_pd(E - 1.0);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(u + i);
    __m256d den = _mm256_fmadd_pd(v, vEm1, one);
    _mm256_storeu_pd(u + i, _mm256_div_pd(_mm256_mul_pd(v, vE), den));
  }
  const double Em1 = E - 1.0;
  for (; i < n; ++i) u[i] = u[i] * E / (1.0 + u[i] * Em1);
}

void v_fused(const double* g1, const double* a, const double* g2,
             const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d t = _mm256_mul_pd(_mm256_loadu_pd(g2 + i), _mm256_loadu_pd(b + i));
    __m256d r = _mm256_fmsub_pd(_mm256_loadu_pd(g1 + i),
                                _mm256_loadu_pd(a + i), t);
    _mm256_storeu_pd(out + i, r);
  }
  for (; i < n; ++i) out[i] = g1[i] * a[i] - g2[i] * b[i];
}

void v_hadamard(const double* g, const double* a, double* out,
                std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(g + i),
                                            _mm256_loadu_pd(a + i)));
  for (; i < n; ++i) out[i] = g[i] * a[i];
}

const PointwiseKernels avx2_table = {
    "avx2",  v_sum,        v_min,       v_max,      v_axpby, v_scale,
    v_pow,   v_clip_floor, v_clip_ceil, v_logistic, v_fused, v_hadamard,
};

}  // namespace

const PointwiseKernels* kernels_avx2() {
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return &avx2_table;
  return nullptr;
}

}  // namespace frackpp

#else

namespace frackpp {
const PointwiseKernels* kernels_avx2() { return nullptr; }
}  // namespace frackpp

#endif
