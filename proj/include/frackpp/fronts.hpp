#ifndef FRACKPP_FRONTS_HPP
#define FRACKPP_FRONTS_HPP

#include <array>
#include <optional>
#include <vector>

#include "frackpp/grid.hpp"
#include "frackpp/params.hpp"
#include "frackpp/stepper.hpp"

namespace frackpp {

// Least-squares fit of log R_lambda(t) against t over a time window.
struct RateFit {
    double level = 0.0;
    double rate = 0.0;
    double intercept = 0.0;
    std::array<double, 2> window{0.0, 0.0};
    double residual = 0.0;  // max abs deviation in log space
    std::optional<double> target;
    std::optional<double> relative_gap;
};

// Largest |x| with u >= lambda, linearly interpolated between bracketing
// samples. 1D scans both half-lines; 2D takes the max over angular rays.
// Returns 0 if u < lambda everywhere.
double level_radius(const Field& u, double lambda, int rays = 64);

// Default window: [0.5, 0.9]*t_end, shrunk so R >= 20h at the left edge and
// R <= L/2 at the right edge.
std::array<double, 2> default_fit_window(const KppRun& run, double lambda);

RateFit fit_rate(const KppRun& run, double lambda,
                 std::array<double, 2> window,
                 std::optional<double> target = std::nullopt);

enum class TailKind { gaussian, power };

// Closed-form level radii for the reaction-only flow u = u0 * e^{a t} with
// u0 = amplitude * |x|^{-(N+2s)} (power) or amplitude * e^{-|x|^2} (gaussian).
std::vector<double> reaction_only_levels(TailKind tail, const ModelParams& p,
                                         double lambda,
                                         const std::vector<double>& times,
                                         double amplitude = 1.0);

struct FloorReport {
    bool satisfied = false;
    double t_lower = 0.0;
    double eps = 0.0;
    std::vector<double> ball_minima;  // per snapshot, over {|x| <= e^{sigma t}}
};

// Finds the earliest snapshot time t_lower from which the minimum of u over
// {|x| <= e^{sigma t}} stays >= eps, and reports the achieved floor.
FloorReport positivity_floor_check(const KppRun& run, double sigma, double eps);

}  // namespace frackpp

#endif
