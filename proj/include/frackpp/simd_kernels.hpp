#ifndef FRACKPP_SIMD_KERNELS_HPP
#define FRACKPP_SIMD_KERNELS_HPP

#include <cstddef>

namespace frackpp {

/// Pointwise array kernels used by the solver inner loops. Two
/// implementations exist: a scalar reference and an AVX2 variant compiled
/// into its own translation unit. kernels() picks one at runtime from CPU
/// support; the environment variable FRACKPP_SIMD=scalar forces the
/// reference path. Both are exposed so tests can compare them directly.
struct PointwiseKernels {
  const char* name;

  double (*sum)(const double* x, std::size_t n);
  double (*minval)(const double* x, std::size_t n);
  double (*maxval)(const double* x, std::size_t n);

  /// y <- a*x + b*y
  void (*axpby)(double a, const double* x, double b, double* y,
                std::size_t n);
  void (*scale)(double* x, double a, std::size_t n);

  /// out <- x^m. Fast paths for m in {1, 1.5, 2, 3, 0.5}; the general
  /// exponent falls back to std::pow lane by lane in both variants.
  void (*pow_m)(const double* x, double m, double* out, std::size_t n);

  /// x <- max(x, lo). Returns the total amount added, sum of (lo - x)+.
  double (*clip_floor)(double* x, double lo, std::size_t n);
  /// x <- min(x, hi). Returns the total amount removed, sum of (x - hi)+.
  double (*clip_ceil)(double* x, double hi, std::size_t n);

  /// Exact logistic flow over one substep: u <- u E / (1 + u (E - 1))
  /// with E = exp(a dt). Maps [0,1] to [0,1] for E > 0.
  void (*logistic_map)(double* u, double E, std::size_t n);

  /// out <- g1.*a - g2.*b (spectral coefficient update with precomputed
  /// real factor arrays, already duplicated across re/im parts).
  void (*fused_update)(const double* g1, const double* a, const double* g2,
                       const double* b, double* out, std::size_t n);

  /// out <- g.*a
  void (*hadamard)(const double* g, const double* a, double* out,
                   std::size_t n);
};

const PointwiseKernels& kernels();
const PointwiseKernels& kernels_scalar();
/// Null when the binary or the CPU lacks AVX2 support.
const PointwiseKernels* kernels_avx2();

}  // namespace frackpp

#endif
