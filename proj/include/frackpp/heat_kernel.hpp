#ifndef FRACKPP_HEAT_KERNEL_HPP
#define FRACKPP_HEAT_KERNEL_HPP

#include <vector>

#include "frackpp/radial_profile.hpp"

namespace frackpp {

/// Tail constant of the unit-time kernel profile:
/// f(r) r^{N+2s} -> C1(N,s) = s 2^{2s} pi^{-(1+N/2)} sin(pi s) Gamma(s) Gamma(s+N/2).
double asymptotic_constant(int N, double s);

/// Radial profile value f(r) of the kernel at unit time, K(x,1) = f(|x|),
/// where the kernel is the inverse transform of exp(-|xi|^{2s}).
///
/// r = 0 uses the closed-form moment integral. r <= 1 uses direct quadrature
/// of the inverse-transform representation (the oscillatory form loses
/// accuracy to its r^{-N} prefactor there). r > 1 integrates the oscillatory
/// Bessel form lobe by lobe between consecutive zeros and sums the
/// alternating lobe series with epsilon acceleration.
double kernel_value(double s, int N, double r);

/// Space-time kernel via exact self-similarity:
/// K(x,t) = t^{-N/2s} f(t^{-1/2s} |x|).
double kernel_value_xt(double s, int N, double x_norm, double t);

/// Profile sampled on the given radii (nonnegative, strictly increasing).
RadialProfile kernel_profile(double s, int N, const std::vector<double>& radii);

/// Total mass of K(.,1) reconstructed from the radial profile by quadrature
/// on [0, R] plus an analytic power-tail completion fitted on [R, 20R].
/// Equals 1 up to quadrature error.
double kernel_mass(double s, int N);

struct DerivativeTail {
    /// Tail law of N f(r) + r f'(r); the fitted constant approaches
    /// -2s * C1(N,s).
    TailLaw law;
    /// True when N f + r f' < 0 throughout the sampled tail.
    bool bracket_negative_tail = false;
    /// d/dt K(x,t) = -(1/2s) t^{-N/2s-1} [N f + eta f'] at eta = |x| t^{-1/2s}:
    /// positive at large radius exactly when the bracket is negative.
    bool kernel_time_increasing_tail = false;
    /// Bracket samples (same radii as law fit input).
    RadialProfile bracket;
};

/// Computes N f + r f' by centered differencing of kernel_value with
/// relative step `rel_step` and fits its tail law. Radii must be >= 1 and
/// span at least one decade.
DerivativeTail derivative_tail_check(double s, int N,
                                     const std::vector<double>& radii,
                                     double rel_step = 1e-3);

}  // namespace frackpp

#endif
