#include "frackpp/barenblatt.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "frackpp/heat_kernel.hpp"
#include "frackpp/special.hpp"

namespace frackpp {

namespace {

// Cubic Catmull-Rom evaluation of a radial sample table v[k] at radii k*h,
// extended evenly through the origin and clamped at the outer end.
struct RadialTable {
    double h = 1.0;
    std::vector<double> v;

    double operator()(double r) const {
        const double x = r / h;
        const long n = static_cast<long>(v.size());
        long i = static_cast<long>(std::floor(x));
        if (i < 0) i = 0;
        if (i > n - 2) i = n - 2;
        const double t = x - i;
        auto at = [&](long k) {
            if (k < 0) return v[static_cast<std::size_t>(-k)];
            if (k > n - 1) return v[static_cast<std::size_t>(n - 1)];
            return v[static_cast<std::size_t>(k)];
        };
        const double p0 = at(i - 1), p1 = at(i), p2 = at(i + 1), p3 = at(i + 2);
        const double t2 = t * t, t3 = t2 * t;
        return 0.5 * ((2.0 * p1) + (-p0 + p2) * t +
                      (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t2 +
                      (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * t3);
    }
};

RadialTable make_radial_table(const Field& f) {
    RadialTable tab;
    const Grid& g = f.grid;
    tab.h = g.spacing();
    const int n = g.points_per_axis;
    const int mid = n / 2;
    if (g.dim == 1) {
        tab.v.resize(mid);
        for (int k = 0; k < mid; ++k) {
            const double right = f.values[static_cast<std::size_t>(mid + k)];
            const double left = f.values[static_cast<std::size_t>(mid - k)];
            tab.v[k] = 0.5 * (right + left);
        }
    } else {
        tab.v = radial_average(f, radial_grid(g));
    }
    return tab;
}

Field kernel_bump(double M, const ModelParams& p, const Grid& g, double t0) {
    Field u(g);
    const int n = g.points_per_axis;
    const int mid = n / 2;
    if (g.dim == 1) {
        std::vector<double> radii(mid + 1);
        for (int k = 0; k <= mid; ++k) radii[k] = k * g.spacing();
        std::vector<double> vals(radii.size());
        for (std::size_t k = 0; k < radii.size(); ++k)
            vals[k] = kernel_value_xt(p.s, 1, radii[k], t0);
        for (int i = 0; i < n; ++i)
            u.values[static_cast<std::size_t>(i)] = vals[static_cast<std::size_t>(std::abs(i - mid))];
    } else {
        std::map<long, double> cache;
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                const long key = static_cast<long>(ix - mid) * (ix - mid) +
                                 static_cast<long>(iy - mid) * (iy - mid);
                auto it = cache.find(key);
                if (it == cache.end())
                    it = cache.emplace(
                              key, kernel_value_xt(p.s, 2,
                                                   std::sqrt(static_cast<double>(key)) * g.spacing(),
                                                   t0))
                             .first;
                u.at2d(ix, iy) = it->second;
            }
    }
    const double mass = field_mass(u);
    for (double& x : u.values) x *= M / mass;
    return u;
}

Field power_tail_bump(double M, const Grid& g, double q,
                      double width) {
    Field u(g);
    const int n = g.points_per_axis;
    for (int iy = 0; iy < (g.dim == 2 ? n : 1); ++iy)
        for (int ix = 0; ix < n; ++ix) {
            const double x = g.coord(ix);
            const double y = (g.dim == 2) ? g.coord(iy) : 0.0;
            const double r2 = x * x + y * y;
            const double v = std::pow(1.0 + r2 / (width * width), -0.5 * q);
            if (g.dim == 2)
                u.at2d(ix, iy) = v;
            else
                u.values[static_cast<std::size_t>(ix)] = v;
        }
    const double mass = field_mass(u);
    for (double& x : u.values) x *= M / mass;
    return u;
}

Field gaussian_bump(double M, const Grid& g, double width) {
    Field u(g);
    const int n = g.points_per_axis;
    for (int iy = 0; iy < (g.dim == 2 ? n : 1); ++iy)
        for (int ix = 0; ix < n; ++ix) {
            const double x = g.coord(ix);
            const double y = (g.dim == 2) ? g.coord(iy) : 0.0;
            const double v = std::exp(-(x * x + y * y) / (width * width));
            if (g.dim == 2)
                u.at2d(ix, iy) = v;
            else
                u.values[static_cast<std::size_t>(ix)] = v;
        }
    const double mass = field_mass(u);
    for (double& x : u.values) x *= M / mass;
    return u;
}

// Fits u(0,t) = F0 (t+a)^{-alpha} via the linear model u^{-1/alpha} ~ t + a.
double fit_age(const std::vector<double>& times, const std::vector<double>& maxima,
               double alpha, double t_min) {
    std::vector<double> ts, ys;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t_min || maxima[i] <= 0.0) continue;
        ts.push_back(times[i]);
        ys.push_back(std::pow(maxima[i], -1.0 / alpha));
    }
    if (ts.size() < 8) throw std::runtime_error("barenblatt_profile: too few points for age fit");
    const LinFit lf = linfit(ts, ys);
    if (!(lf.slope > 0.0)) throw std::runtime_error("barenblatt_profile: age fit has nonpositive slope");
    return lf.intercept / lf.slope;
}

struct Rescaled {
    RadialTable table;
    double t_shifted;  // t + age
    double scale;      // (t+age)^alpha
    double stretch;    // (t+age)^beta
    double r_max;      // largest reliable sample radius
};

Rescaled rescale(const Field& f, double age, double alpha, double beta) {
    Rescaled r;
    r.table = make_radial_table(f);
    r.t_shifted = f.time + age;
    r.scale = std::pow(r.t_shifted, alpha);
    r.stretch = std::pow(r.t_shifted, beta);
    r.r_max = (static_cast<double>(r.table.v.size()) - 2.0) * r.table.h;
    return r;
}

}  // namespace

RadialProfile barenblatt_profile(double M, const ModelParams& p, const Grid& g,
                                 const StepperConfig& cfg, double tol) {
    if (!(M > 0.0)) throw std::invalid_argument("barenblatt_profile: M > 0 required");
    p.validate();
    const CriticalExponents ex = critical_exponents(p);
    const double alpha = ex.alpha, beta = ex.beta;

    const double h = g.spacing();
    double t0 = std::max(10.0 * cfg.dt, std::pow(2.0 * h, 2.0 * p.s));
    Field u0;
    if (p.m >= 1.0) {
        u0 = kernel_bump(M, p, g, t0);
    } else if (p.m > ex.m_1) {
        u0 = power_tail_bump(M, g, p.dim + 2.0 * p.s, std::max(0.5, 2.0 * h));
        t0 = 0.0;
    } else {
        // fast-decay bump; the universal heavy tail is generated by the flow
        u0 = gaussian_bump(M, g, std::max(1.0, 4.0 * h));
        t0 = 0.0;
    }

    StepperConfig run_cfg = cfg;
    if (run_cfg.snapshot_times.empty())
        run_cfg.snapshot_times = {0.3 * cfg.t_end, 0.45 * cfg.t_end,
                                  0.6 * cfg.t_end, 0.8 * cfg.t_end, cfg.t_end};
    std::sort(run_cfg.snapshot_times.begin(), run_cfg.snapshot_times.end());
    if (run_cfg.snapshot_times.size() < 3)
        throw std::invalid_argument("barenblatt_profile: need at least 3 snapshot times");

    SolutionTrace trace = run_fpme(u0, p, run_cfg);
    if (trace.snapshots.size() != run_cfg.snapshot_times.size())
        throw std::runtime_error("barenblatt_profile: missing snapshots (t_end too small?)");

    const double age =
        fit_age(trace.times, trace.maxima, alpha, 0.25 * cfg.t_end);

    std::vector<Rescaled> rs;
    for (const Field& f : trace.snapshots) rs.push_back(rescale(f, age, alpha, beta));

    const double value_floor = std::max(100.0 * cfg.positivity_floor, 1e-12);
    // periodic images inflate the heavy tail; keep r <= L/8 at the later time
    auto residual_between = [&](const Rescaled& a, const Rescaled& b) {
        const double eta_lo = 3.0 * h / std::min(a.stretch, b.stretch);
        const double eta_hi = 0.125 * g.half_length / std::max(a.stretch, b.stretch);
        if (!(eta_hi > eta_lo)) return HUGE_VAL;
        const std::vector<double> etas = log_spaced(eta_lo, eta_hi, 240);
        double worst = 0.0;
        int counted = 0;
        for (double eta : etas) {
            const double ra = eta * a.stretch, rb = eta * b.stretch;
            if (ra > a.r_max || rb > b.r_max) continue;
            const double ua = a.table(ra), ub = b.table(rb);
            if (ua < value_floor || ub < value_floor) continue;
            const double fa = a.scale * ua, fb = b.scale * ub;
            worst = std::max(worst, std::abs(fa - fb) / std::max(fa, fb));
            ++counted;
        }
        if (counted < 20) return HUGE_VAL;
        return worst;
    };

    std::vector<double> residuals;
    for (std::size_t i = 0; i + 1 < rs.size(); ++i)
        residuals.push_back(residual_between(rs[i], rs[i + 1]));
    const double last_res = residuals.back();
    if (!(last_res <= tol)) {
        std::string seq;
        for (double r : residuals) seq += " " + std::to_string(r);
        throw std::runtime_error(
            "barenblatt_profile: no self-similar convergence within t_end "
            "(pair residuals" + seq + ", tolerance " + std::to_string(tol) +
            ", fitted age " + std::to_string(age) + ")");
    }

    const Rescaled& fin = rs.back();
    RadialProfile out;
    out.dim = p.dim;
    const int n_samp = static_cast<int>(fin.table.v.size());
    for (int k = 0; k < n_samp; ++k) {
        const double r = k * h;
        if (r > 0.9 * g.half_length) break;
        out.radii.push_back(r / fin.stretch);
        out.values.push_back(fin.scale * fin.table.v[static_cast<std::size_t>(k)]);
    }
    out.meta["m"] = p.m;
    out.meta["s"] = p.s;
    out.meta["dim"] = p.dim;
    out.meta["mass"] = M;
    out.meta["alpha"] = alpha;
    out.meta["beta"] = beta;
    out.meta["t_age"] = age;
    out.meta["t_spread"] = t0;
    out.meta["t_final"] = trace.snapshots.back().time;
    out.meta["eta_clean"] = 0.125 * g.half_length / fin.stretch;
    out.meta["collapse_residual"] = last_res;
    for (std::size_t i = 0; i < residuals.size(); ++i)
        out.meta["residual_" + std::to_string(i)] = residuals[i];
    out.meta["F0"] = out.values.empty() ? 0.0 : out.values[0];
    out.validate();
    return out;
}

namespace {

// log-log linear interpolation on a positive profile
double profile_value(const RadialProfile& p, double eta) {
    const std::vector<double>& r = p.radii;
    const std::vector<double>& v = p.values;
    if (eta <= r.front()) return v.front();
    if (eta >= r.back()) return v.back();
    auto it = std::upper_bound(r.begin(), r.end(), eta);
    const std::size_t i = static_cast<std::size_t>(it - r.begin());
    const double r0 = r[i - 1], r1 = r[i];
    if (r0 <= 0.0 || v[i - 1] <= 0.0 || v[i] <= 0.0) {
        const double t = (eta - r0) / (r1 - r0);
        return (1.0 - t) * v[i - 1] + t * v[i];
    }
    const double t = std::log(eta / r0) / std::log(r1 / r0);
    return std::exp((1.0 - t) * std::log(v[i - 1]) + t * std::log(v[i]));
}

}  // namespace

MassScalingReport verify_mass_scaling(double M, const ModelParams& p,
                                      const Grid& g, const StepperConfig& cfg) {
    p.validate();
    if (!(M > 0.0)) throw std::invalid_argument("verify_mass_scaling: M > 0 required");
    const double time_scale = std::pow(M, p.m - 1.0);

    const double h = g.spacing();
    const double t0 = std::max(10.0 * cfg.dt, std::pow(2.0 * h, 2.0 * p.s));
    Field u1 = kernel_bump(1.0, p, g, t0);
    Field um = u1;
    for (double& v : um.values) v *= M;

    StepperConfig cfg_m = cfg;
    if (cfg_m.snapshot_times.empty())
        cfg_m.snapshot_times = {0.5 * cfg.t_end, 0.75 * cfg.t_end, cfg.t_end};
    std::sort(cfg_m.snapshot_times.begin(), cfg_m.snapshot_times.end());

    StepperConfig cfg_1 = cfg;
    cfg_1.t_end = time_scale * cfg.t_end;
    cfg_1.snapshot_times.clear();
    for (double t : cfg_m.snapshot_times) {
        // land exactly on a step boundary of the unit-mass run
        const double tm = std::round(time_scale * t / cfg.dt) * cfg.dt;
        cfg_1.snapshot_times.push_back(tm);
    }
    cfg_1.t_end = std::max(cfg_1.t_end, cfg_1.snapshot_times.back());

    SolutionTrace tr_m = run_fpme(um, p, cfg_m);
    SolutionTrace tr_1 = run_fpme(u1, p, cfg_1);
    if (tr_m.snapshots.size() != tr_1.snapshots.size())
        throw std::runtime_error("verify_mass_scaling: snapshot mismatch");

    MassScalingReport rep;
    rep.t_window = {cfg_m.snapshot_times.front(), cfg_m.snapshot_times.back()};
    for (std::size_t j = 0; j < tr_m.snapshots.size(); ++j) {
        const Field& fm = tr_m.snapshots[j];
        const Field& f1 = tr_1.snapshots[j];
        const double peak = field_max(fm);
        for (std::size_t i = 0; i < fm.values.size(); ++i) {
            const double lhs = fm.values[i];
            const double rhs = M * f1.values[i];
            if (std::max(lhs, rhs) < 1e-8 * peak) continue;
            const double gap = std::abs(lhs - rhs) / std::max(lhs, rhs);
            ++rep.n_checked;
            if (gap > rep.max_rel_gap) {
                rep.max_rel_gap = gap;
                const int n = g.points_per_axis;
                const int ix = static_cast<int>(i) % n;
                const int iy = static_cast<int>(i) / n;
                const double x = g.coord(ix);
                const double y = (g.dim == 2) ? g.coord(iy) : 0.0;
                rep.x_worst = std::sqrt(x * x + y * y);
                rep.t_worst = fm.time;
            }
        }
    }
    if (rep.n_checked < 20)
        throw std::runtime_error("verify_mass_scaling: too few comparable points");
    return rep;
}

LowerParabolicReport verify_lower_parabolic_estimate(
    const ModelParams& p, const Grid& g, const StepperConfig& cfg,
    std::array<double, 2> r_window, double bump_radius) {
    if (p.m < 1.0)
        throw std::invalid_argument("verify_lower_parabolic_estimate: m >= 1 required");
    StepperConfig run_cfg = cfg;
    if (run_cfg.snapshot_times.empty()) {
        for (double t : log_spaced(0.1 * cfg.t_end, cfg.t_end, 6))
            run_cfg.snapshot_times.push_back(std::max(1.0, std::round(t / cfg.dt)) * cfg.dt);
        run_cfg.snapshot_times.erase(
            std::unique(run_cfg.snapshot_times.begin(), run_cfg.snapshot_times.end()),
            run_cfg.snapshot_times.end());
    }
    if (run_cfg.snapshot_times.size() < 4)
        throw std::invalid_argument("verify_lower_parabolic_estimate: need >= 4 snapshot times");

    // plateau >= 1 on the ball, smooth shoulder, fast tails
    Field u0(g);
    const int n = g.points_per_axis;
    for (int iy = 0; iy < (g.dim == 2 ? n : 1); ++iy)
        for (int ix = 0; ix < n; ++ix) {
            const double x = g.coord(ix);
            const double y = (g.dim == 2) ? g.coord(iy) : 0.0;
            const double r = std::sqrt(x * x + y * y);
            const double v = 1.05 / (1.0 + std::exp(20.0 * (r - 1.3 * bump_radius)));
            if (g.dim == 2)
                u0.at2d(ix, iy) = v;
            else
                u0.values[static_cast<std::size_t>(ix)] = v;
        }

    SolutionTrace trace = run_fpme(u0, p, run_cfg);
    const double q = p.dim + 2.0 * p.s;

    LowerParabolicReport rep;
    rep.r_window = r_window;
    rep.t_window = {trace.snapshots.front().time, trace.snapshots.back().time};

    std::vector<double> log_t, log_pref;
    double c_star = HUGE_VAL;
    for (const Field& f : trace.snapshots) {
        RadialTable tab = make_radial_table(f);
        std::vector<double> lr, lv;
        double pref_geo = 0.0;
        int n_pref = 0;
        for (double r : log_spaced(r_window[0], r_window[1], 48)) {
            const double v = tab(r);
            if (v <= 10.0 * cfg.positivity_floor)
                throw std::runtime_error(
                    "verify_lower_parabolic_estimate: tail at or below the positivity floor");
            lr.push_back(std::log(r));
            lv.push_back(std::log(v));
            pref_geo += std::log(v * std::pow(r, q));
            ++n_pref;
            c_star = std::min(c_star, v * std::pow(r, q) / f.time);
        }
        const LinFit lf = linfit(lr, lv);
        rep.spatial_exponent = lf.slope;  // last snapshot wins
        rep.spatial_residual = lf.max_abs_residual;
        log_t.push_back(std::log(f.time));
        log_pref.push_back(pref_geo / n_pref);
    }
    const LinFit tf = linfit(log_t, log_pref);
    rep.time_exponent = tf.slope;
    rep.time_residual = tf.max_abs_residual;
    rep.c_star = c_star;
    return rep;
}

}  // namespace frackpp
