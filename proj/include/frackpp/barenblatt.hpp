#ifndef FRACKPP_BARENBLATT_HPP
#define FRACKPP_BARENBLATT_HPP

#include <array>

#include "frackpp/grid.hpp"
#include "frackpp/params.hpp"
#include "frackpp/radial_profile.hpp"
#include "frackpp/stepper.hpp"

namespace frackpp {

// Extracts the self-similar profile F(eta) = (t+a)^alpha u(eta (t+a)^beta, t)
// from an evolved mass-M bump, where the effective age a is fitted from the
// decay of the maximum. Returns once the last two rescaled snapshots agree
// within `tol` (max pointwise relative gap on the resolved annulus); throws
// with the achieved discrepancy otherwise.
//
// meta keys: m, s, dim, mass, alpha, beta, t_age, t_final, collapse_residual,
// F0 (peak value of the returned profile).
RadialProfile barenblatt_profile(double M, const ModelParams& p, const Grid& g,
                                 const StepperConfig& cfg, double tol = 0.02);

struct MassScalingReport {
    double max_rel_gap = 0.0;
    double x_worst = 0.0;      // |x| where the worst gap occurred
    double t_worst = 0.0;      // snapshot time (mass-M clock) of the worst gap
    int n_checked = 0;
    std::array<double, 2> t_window{0.0, 0.0};
};

// Checks the exact scaling identity u_M(x, t) = M u_1(x, M^{m-1} t)
// pointwise on the grid: both sides start from compatible bumps
// (u_M(., 0) = M u_1(., 0)) and are compared at matched snapshot times.
// Deviations measure pure integration error.
MassScalingReport verify_mass_scaling(double M, const ModelParams& p,
                                      const Grid& g, const StepperConfig& cfg);

struct LowerParabolicReport {
    double spatial_exponent = 0.0;   // fitted tail slope at the final time
    double time_exponent = 0.0;      // fitted growth of the tail prefactor
    double c_star = 0.0;             // largest C with u >= C t |x|^{-(N+2s)}
    std::array<double, 2> r_window{0.0, 0.0};
    std::array<double, 2> t_window{0.0, 0.0};
    double spatial_residual = 0.0;
    double time_residual = 0.0;
};

// Evolves an indicator-like bump (>= 1 on the unit ball) and fits the
// early-time far-field law u ~ C t |x|^{-(N+2s)} on r in r_window for the
// snapshot times of cfg (all inside t_window).
LowerParabolicReport verify_lower_parabolic_estimate(
    const ModelParams& p, const Grid& g, const StepperConfig& cfg,
    std::array<double, 2> r_window, double bump_radius = 1.0);

}  // namespace frackpp

#endif
