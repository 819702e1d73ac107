#include "frackpp/fronts.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "frackpp/special.hpp"

namespace frackpp {

namespace {

double crossing(double r_in, double v_in, double r_out, double v_out,
                double lambda) {
    if (v_in == v_out) return r_in;
    return r_in + (lambda - v_in) * (r_out - r_in) / (v_out - v_in);
}

// Largest interpolated crossing along one sampled ray (values[k] at radii[k]).
double ray_crossing(const std::vector<double>& radii,
                    const std::vector<double>& values, double lambda) {
    const std::size_t n = radii.size();
    if (values[n - 1] >= lambda) return radii[n - 1];
    for (std::size_t k = n - 1; k-- > 0;)
        if (values[k] >= lambda)
            return crossing(radii[k], values[k], radii[k + 1], values[k + 1],
                            lambda);
    return 0.0;
}

}  // namespace

double level_radius(const Field& u, double lambda, int rays) {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw std::invalid_argument("level_radius: lambda must lie in (0,1)");
    const Grid& g = u.grid;
    const int n = g.points_per_axis;
    const double h = g.spacing();

    if (g.dim == 1) {
        const int mid = n / 2;  // coord(mid) = 0
        double best = 0.0;
        // right half-line: x = coord(mid..n-1) >= 0
        {
            std::vector<double> r(n - mid), v(n - mid);
            for (int i = mid; i < n; ++i) {
                r[i - mid] = g.coord(i);
                v[i - mid] = u.values[static_cast<std::size_t>(i)];
            }
            best = std::max(best, ray_crossing(r, v, lambda));
        }
        // left half-line: x = coord(mid, mid-1, ..., 0), |x| increasing
        {
            std::vector<double> r(mid + 1), v(mid + 1);
            for (int i = mid; i >= 0; --i) {
                r[mid - i] = -g.coord(i);
                v[mid - i] = u.values[static_cast<std::size_t>(i)];
            }
            best = std::max(best, ray_crossing(r, v, lambda));
        }
        return best;
    }

    const int nr = n / 2;
    std::vector<double> r(nr), v(nr);
    for (int k = 0; k < nr; ++k) r[k] = k * h;
    double best = 0.0;
    for (int j = 0; j < rays; ++j) {
        const double th = 2.0 * M_PI * j / rays;
        const double cx = std::cos(th), sy = std::sin(th);
        for (int k = 0; k < nr; ++k)
            v[k] = interpolate(u, r[k] * cx, r[k] * sy);
        best = std::max(best, ray_crossing(r, v, lambda));
    }
    return best;
}

std::array<double, 2> default_fit_window(const KppRun& run, double lambda) {
    std::size_t j = run.level_targets.size();
    for (std::size_t i = 0; i < run.level_targets.size(); ++i)
        if (std::abs(run.level_targets[i] - lambda) <= 1e-12) j = i;
    if (j == run.level_targets.size())
        throw std::invalid_argument("default_fit_window: level not tracked in run");
    if (run.trace.times.empty() || run.trace.snapshots.empty())
        throw std::invalid_argument("default_fit_window: run has no snapshots");

    const double t_end = run.trace.times.back();
    double t_lo = 0.5 * t_end;
    double t_hi = 0.9 * t_end;
    const Grid& g = run.trace.snapshots[0].grid;
    const double r_min = 20.0 * g.spacing();
    const double r_max = 0.5 * g.half_length;
    const std::size_t ns = run.snapshot_times.size();
    for (std::size_t i = 0; i < ns; ++i) {
        const double t = run.snapshot_times[i];
        const double r = run.level_radii[j][i];
        if (r < r_min && t >= t_lo) {
            // exclude this point: window starts at the next snapshot
            t_lo = (i + 1 < ns) ? std::max(t_lo, 0.5 * (t + run.snapshot_times[i + 1]))
                                : t_end + 1.0;
        }
        if (r > r_max && t <= t_hi) {
            t_hi = (i > 0) ? std::min(t_hi, 0.5 * (run.snapshot_times[i - 1] + t))
                           : -1.0;
        }
    }
    return {t_lo, t_hi};
}

RateFit fit_rate(const KppRun& run, double lambda,
                 std::array<double, 2> window, std::optional<double> target) {
    std::size_t j = run.level_targets.size();
    for (std::size_t i = 0; i < run.level_targets.size(); ++i)
        if (std::abs(run.level_targets[i] - lambda) <= 1e-12) j = i;
    if (j == run.level_targets.size())
        throw std::invalid_argument("fit_rate: level not tracked in run");

    std::vector<double> ts, logs;
    for (std::size_t i = 0; i < run.snapshot_times.size(); ++i) {
        const double t = run.snapshot_times[i];
        if (t < window[0] - 1e-12 || t > window[1] + 1e-12) continue;
        const double r = run.level_radii[j][i];
        if (r <= 0.0)
            throw std::runtime_error("fit_rate: zero radius inside fit window at t = " +
                                     std::to_string(t));
        ts.push_back(t);
        logs.push_back(std::log(r));
    }
    if (ts.size() < 8)
        throw std::runtime_error("fit_rate: fewer than 8 snapshots in fit window");

    const LinFit lf = linfit(ts, logs);
    RateFit out;
    out.level = lambda;
    out.rate = lf.slope;
    out.intercept = lf.intercept;
    out.window = window;
    out.residual = lf.max_abs_residual;
    if (target) {
        out.target = target;
        out.relative_gap = std::abs(lf.slope - *target) / std::abs(*target);
    }
    return out;
}

std::vector<double> reaction_only_levels(TailKind tail, const ModelParams& p,
                                         double lambda,
                                         const std::vector<double>& times,
                                         double amplitude) {
    if (!(lambda > 0.0)) throw std::invalid_argument("reaction_only_levels: lambda > 0 required");
    if (!(amplitude > 0.0))
        throw std::invalid_argument("reaction_only_levels: amplitude > 0 required");
    const double a = p.reaction.fprime0;
    const double q = p.dim + 2.0 * p.s;
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) {
        if (tail == TailKind::power) {
            // amplitude * R^{-q} * e^{a t} = lambda
            out.push_back(std::pow(amplitude * std::exp(a * t) / lambda, 1.0 / q));
        } else {
            // amplitude * e^{-R^2} * e^{a t} = lambda
            const double arg = a * t + std::log(amplitude / lambda);
            if (arg < 0.0)
                throw std::runtime_error(
                    "reaction_only_levels: level above the maximum of u0*e^{at} at t = " +
                    std::to_string(t));
            out.push_back(std::sqrt(arg));
        }
    }
    return out;
}

FloorReport positivity_floor_check(const KppRun& run, double sigma, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("positivity_floor_check: eps > 0 required");
    FloorReport rep;
    const std::size_t ns = run.trace.snapshots.size();
    rep.ball_minima.resize(ns);
    for (std::size_t i = 0; i < ns; ++i) {
        const Field& f = run.trace.snapshots[i];
        const double radius =
            std::min(std::exp(sigma * f.time), 0.5 * f.grid.half_length);
        rep.ball_minima[i] = ball_min(f, radius);
    }
    // earliest snapshot index from which the ball minimum stays >= eps
    std::size_t first = ns;
    for (std::size_t i = ns; i-- > 0;) {
        if (rep.ball_minima[i] >= eps)
            first = i;
        else
            break;
    }
    if (first == ns) return rep;  // never satisfied through the horizon
    rep.satisfied = true;
    rep.t_lower = run.trace.snapshots[first].time;
    rep.eps = *std::min_element(rep.ball_minima.begin() + first, rep.ball_minima.end());
    return rep;
}

}  // namespace frackpp
