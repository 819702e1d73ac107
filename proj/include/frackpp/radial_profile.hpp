#ifndef FRACKPP_RADIAL_PROFILE_HPP
#define FRACKPP_RADIAL_PROFILE_HPP

#include <array>
#include <map>
#include <string>
#include <vector>

namespace frackpp {

/// Radial samples of a profile function (kernel, rescaled bump, self-similar
/// shape). `meta` carries the defining parameters (s, m, gamma as applicable).
struct RadialProfile {
    std::vector<double> radii;
    std::vector<double> values;
    int dim = 1;
    std::map<std::string, double> meta;

    void validate() const;
};

/// Fitted power law |value| ~ constant * r^exponent over window [r_lo, r_hi].
struct TailLaw {
    double exponent = 0.0;
    /// Geometric mean of |value| * r^{-expected_exponent} over the final
    /// decade of the window.
    double constant = 0.0;
    /// Constant with the leading finite-r correction removed by a two-term
    /// least-squares fit C + D * r^{-gap} on the final decade. Equals
    /// `constant` when no correction gap was supplied.
    double constant_extrapolated = 0.0;
    std::array<double, 2> window{0.0, 0.0};
    /// Max relative deviation of the fitted power law inside the window.
    double residual = 0.0;
};

/// Fits a power law to the profile tail.
///
/// The window is [r_lo, r_hi] intersected with the sampled radii; pass zeros
/// to use [max(1, first radius), last radius]. The effective lower edge is
/// clamped to 1. The profile must extend to at least 10 * r_lo and the window
/// must span at least a factor 2, with at least eight samples inside. Values
/// must be nonzero with a single sign throughout the window; the fit uses
/// their absolute values.
///
/// `correction_gap` > 0 enables the two-term extrapolation of the constant
/// (see TailLaw::constant_extrapolated).
TailLaw tail_fit(const RadialProfile& p, double expected_exponent,
                 double r_lo = 0.0, double r_hi = 0.0,
                 double correction_gap = 0.0);

/// Power-law fit with the leading finite-r correction in the model:
/// log v = log C + p log r + log(1 + D r^{-gap}), solved by scanning D
/// (golden section) with (C, p) linear at each D. Use when the window cannot
/// be placed deep enough for the plain fit; exponent and constant are the
/// corrected estimates and `residual` is the max relative model deviation.
TailLaw tail_fit_corrected(const RadialProfile& p, double expected_exponent,
                           double r_lo, double r_hi, double gap = 1.0);

/// n log-spaced radii spanning [r_lo, r_hi] inclusive.
std::vector<double> log_spaced(double r_lo, double r_hi, int n);

}  // namespace frackpp

#endif
