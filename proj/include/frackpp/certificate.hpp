#ifndef FRACKPP_CERTIFICATE_HPP
#define FRACKPP_CERTIFICATE_HPP

#include <array>
#include <vector>

#include "frackpp/params.hpp"
#include "frackpp/radial_profile.hpp"

namespace frackpp {

/// Envelope constants of the mass-1 source-type profile F_1:
///   K2 / (1 + r^{N+2s}) <= F_1(r) <= K1 r^{-(N+2s)},  F0 = F_1(0).
/// Measured from an evolved profile; K1 carries a +2% and K2 a -2% margin
/// for sampling error. The expansion iteration requires K2 < 2 K1.
struct ProfileConstants {
    double F0 = 0.0;
    double K1 = 0.0;
    double K2 = 0.0;
    std::array<double, 2> tail_window{0.0, 0.0};  // radii where K1 was read
    double collapse_residual = 0.0;
};

/// Reads the envelope constants off a source-type profile. The upper constant
/// is the sup of F r^{N+2s} over [max(0.15 r_clean, 3 samples in), r_clean]
/// and the lower one the inf of F (1 + r^{N+2s}) over (0, r_clean], where
/// r_clean is the profile's wrap-free horizon (meta["eta_clean"]).
ProfileConstants profile_constants_from(const RadialProfile& profile);

/// Coarse mass-1 source-type run (1024 points in 1D, 128^2 in 2D) sized by
/// regime, followed by profile_constants_from. Seconds of work.
ProfileConstants calibrate_profile_constants(const ModelParams& p);

/// State of the expanding-positivity construction. Starting from data above
/// the plateau bump
///   v_0 = eps on {|x| <= rho_0},  eps (rho_0/|x|)^{N+2s} outside,
/// the solution stays >= eps on balls whose radius grows by the factor L_k
/// every waiting time t0:
///   v(x, k t0) >= eps  for |x| <= rho_k,  rho_{k+1} = L_k rho_k,
/// with every L_k >= e^{sigma t0}. delta is the linearization threshold
/// (f(w) >= (f(delta)/delta) w on [0, delta]); M1 and tau1 identify the
/// source-type subsolution B_{M1}(., tau1) fitted under v_0 at rho_0.
struct CertificateState {
    double sigma = 0.0;
    double delta = 0.0;
    double t0 = 0.0;
    double eps0 = 0.0;  // largest admissible plateau height, delta e^{-f'(0) t0}
    double eps = 0.0;   // plateau height used, 0 < eps <= eps0
    double M1 = 0.0;
    double tau1 = 0.0;
    std::vector<double> rho;  // rho_0 .. rho_{k_max}
    std::vector<double> L;    // L_0 .. L_{k_max-1}, decreasing to L_inf
    double L_inf = 0.0;
};

/// Runs the construction for a target expansion rate sigma < sigma2.
/// delta solves f(delta)/((N+2s) delta) = (sigma2 + max(sigma, N(m-1) beta
/// sigma2))/2; t0 is the smallest time >= 1 satisfying both the profile
/// matching condition and L_inf >= e^{sigma t0} (a 1% margin is added);
/// eps <= 0 requests the largest admissible height eps0. Throws
/// std::invalid_argument for m <= m_1, sigma outside (0, sigma2), rho0 < 1,
/// uncalibrated constants, or K2 >= 2 K1, and std::runtime_error when no t0
/// exists below the scan horizon or eps exceeds eps0.
CertificateState certificate_run(const ModelParams& p, double sigma, double eps,
                                 double rho0, int k_max,
                                 const ProfileConstants& pc);

/// Convenience overload: calibrates the profile constants internally.
CertificateState certificate_run(const ModelParams& p, double sigma, double eps,
                                 double rho0, int k_max);

/// Pointwise check of the starting comparison v_0 >= B_{M1}(., tau1) using a
/// measured profile (tail extrapolated by K1 beyond its last sample).
/// Returns the smallest margin (v_0 - B)/eps over log-spaced |x| <= r_max;
/// zero at |x| = 0 and at the tail by construction, so values >= -0.02 mean
/// the comparison holds to sampling accuracy.
double certificate_soundness(const CertificateState& st, const ModelParams& p,
                             const ProfileConstants& pc,
                             const RadialProfile& profile, double r_max);

}  // namespace frackpp

#endif
