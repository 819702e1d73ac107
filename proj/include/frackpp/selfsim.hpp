#ifndef FRACKPP_SELFSIM_HPP
#define FRACKPP_SELFSIM_HPP

#include <array>
#include <vector>

#include "frackpp/radial_profile.hpp"
#include "frackpp/stepper.hpp"

namespace frackpp {

/// Similarity exponents of U(x,t) = t^{alpha1} F(|x| t^{beta1}), the solution
/// of the linear flow u_t + (-Delta)^s u = 0 with data |x|^gamma.
struct SelfSimExponents {
    double alpha1 = 0.0;  // gamma / 2s
    double beta1 = 0.0;   // -1 / 2s
    double gamma = 0.0;   // admissible growth: 0 < gamma < 2s
};

/// Throws std::invalid_argument unless 0 < gamma < 2s (faster growth leaves
/// the weighted class the linear semigroup acts on).
SelfSimExponents selfsim_exponents(double gamma, double s);

/// Cached interpolant of the unit-time kernel radial profile f(r): cubic
/// spline in log-log coordinates on r in [1e-4, 1e6] (200 samples per
/// decade, interior relative error below 1e-7), quadratic even extension
/// below, and the exact power tail C1(N,s) r^{-(N+2s)} above. Build cost is
/// one kernel evaluation per node (about half a second); evaluation is a
/// table lookup. Immutable after construction.
class KernelSpline {
  public:
    KernelSpline(double s, int dim);

    double operator()(double r) const;
    double tail_constant() const { return c1_; }
    double s() const { return s_; }
    int dim() const { return dim_; }

  private:
    double s_;
    int dim_;
    double c1_;    // tail constant C1(N,s)
    double f0_;    // f(0)
    double fr0_;   // f(r_min), anchors the even extension
    std::vector<double> logr_, logf_, d2_;  // spline nodes and second derivatives
};

/// Profile F(eta) = integral of f(|eta e - z|) |z|^gamma dz over R^N, by
/// graded-panel quadrature against the cached kernel (panels refined at the
/// |z|^gamma cusp, the kernel core, and mapped tails). dims 1 and 2; for
/// dim 2 the angular factor uses a 256-point periodic rule, accurate for
/// eta up to a few hundred. meta keys: gamma, s, dim, alpha1, beta1, F0.
RadialProfile selfsim_profile(double gamma, double s, int N,
                              const std::vector<double>& etas);

/// Same, reusing an already built kernel spline.
RadialProfile selfsim_profile(double gamma, const KernelSpline& kernel,
                              const std::vector<double>& etas);

struct DerivBoundReport {
    /// sup over the last sampled decade of |gamma F - eta F'| / eta^gamma,
    /// with F' from nonuniform centered differences.
    double sup_ratio = 0.0;
    std::array<double, 2> window{0.0, 0.0};
    /// Count of F_{i+1} < F_i - tol steps over the whole profile, and the
    /// tolerance used (differencing/quadrature noise allowance).
    int monotonicity_violations = 0;
    double mono_tolerance = 0.0;
    double min_step = 0.0;  // most negative F_{i+1} - F_i observed
    /// Per-sample |gamma F - eta F'| / eta^gamma at every interior eta
    /// (endpoints excluded: the three-point stencil needs both neighbors).
    std::vector<double> etas;
    std::vector<double> ratios;
};

/// Difference-based check of the tail bound |gamma F - eta F'| <= C eta^gamma
/// and of radial monotonicity F' >= 0. Requires at least 16 samples.
DerivBoundReport profile_derivative_bound(const RadialProfile& p, double gamma);

struct SelfSimEvolutionReport {
    double alpha1 = 0.0;
    double alpha1_fitted = 0.0;   // log-log growth of U(0,t)
    double collapse_max_rel = 0.0;   // interior gap to the quadrature profile
    double boundary_max_rel = 0.0;   // gap over the truncation-affected zone
    double eta_max = 0.0;            // largest interior eta compared
    std::array<double, 2> t_window{0.0, 0.0};  // snapshots actually used
    int n = 0;
    double half_length = 0.0;
    int snapshots_used = 0;
};

/// Evolves the linear equation from |x|^gamma data (smoothly flattened to the
/// cap (0.8 L)^gamma between 0.7 L and 0.9 L) with the exact spectral
/// propagator on a 65536-point box of half-length 2048, then compares
/// t^{-alpha1} U(eta t^{1/2s}, t) with the quadrature profile on |x| <= L/4
/// at every snapshot whose similarity length t^{1/2s} spans at least four
/// cells; earlier snapshots are dropped (at least two must survive).
/// cfg supplies dt, t_end, and snapshot times (defaults: dt = 0.025,
/// t_end = 1, nine log-spaced snapshots on [0.3 t_end, t_end]).
SelfSimEvolutionReport selfsim_evolution_check(double gamma, double s,
                                               const StepperConfig& cfg);

}  // namespace frackpp

#endif
