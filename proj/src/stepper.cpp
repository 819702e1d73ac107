#include "frackpp/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>

#include "frackpp/fronts.hpp"
#include "frackpp/simd_kernels.hpp"

namespace frackpp {

void StepperConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("StepperConfig: dt must be positive");
    if (!(t_end > 0.0)) throw std::invalid_argument("StepperConfig: t_end must be positive");
    if (positivity_floor < 0.0)
        throw std::invalid_argument("StepperConfig: positivity_floor must be nonnegative");
    for (double t : snapshot_times)
        if (t < 0.0 || t > t_end + dt)
            throw std::invalid_argument("StepperConfig: snapshot time outside [0, t_end]");
    for (double l : level_targets)
        if (!(l > 0.0 && l < 1.0))
            throw std::invalid_argument("StepperConfig: level targets must lie in (0,1)");
    if (rays < 4) throw std::invalid_argument("StepperConfig: rays must be >= 4");
}

double tau_rescale(double t, double m, double a) {
    if (!(a > 0.0)) throw std::invalid_argument("tau_rescale: a = f'(0) must be positive");
    const double c = (m - 1.0) * a;
    if (std::abs(m - 1.0) < 1e-14) return t;
    return std::expm1(c * t) / c;
}

double linearized_supersolution_bound(double x_norm, double t,
                                      const ModelParams& p, double M,
                                      double tau0, double k1) {
    if (!(k1 > 0.0))
        throw std::invalid_argument(
            "linearized_supersolution_bound: missing K1 calibration");
    if (!(x_norm > 0.0))
        throw std::invalid_argument("linearized_supersolution_bound: |x| > 0 required");
    const CriticalExponents ex = critical_exponents(p);
    if (p.m <= ex.m_1)
        throw std::invalid_argument("linearized_supersolution_bound: m > m_1 required");
    const double a = p.reaction.fprime0;
    const double two_bs = 2.0 * ex.beta * p.s;
    const double tau = tau_rescale(t, p.m, a);
    return k1 * std::pow(M, 1.0 + two_bs * (p.m - 1.0)) * std::exp(a * t) *
           std::pow(tau + tau0, two_bs) * std::pow(x_norm, -(p.dim + 2.0 * p.s));
}

Stepper::Stepper(const Grid& g, const ModelParams& p, const StepperConfig& cfg,
                 bool with_reaction)
    : grid_(g), params_(p), cfg_(cfg), with_reaction_(with_reaction), op_(g) {
    p.validate();
    cfg.validate();
    if (cfg_.scheme == Scheme::exact_linear && params_.m != 1.0)
        throw std::invalid_argument("Stepper: exact_linear scheme requires m = 1");
    if (with_reaction_) params_.reaction.validate();

    ws_u_ = op_.make_workspace();
    ws_w_ = op_.make_workspace();
    const std::vector<double> sym = op_.symbol(params_.s);
    const std::size_t nc = op_.complex_size();
    lambda_.resize(2 * nc);
    for (std::size_t i = 0; i < nc; ++i)
        lambda_[2 * i] = lambda_[2 * i + 1] = sym[i];
    g1_.assign(2 * nc, 1.0);
    g2_.assign(2 * nc, 0.0);
    if (cfg_.scheme == Scheme::exact_linear)
        for (std::size_t i = 0; i < 2 * nc; ++i)
            g1_[i] = std::exp(-lambda_[i] * cfg_.dt);
    if (cfg_.scheme == Scheme::explicit_euler)
        for (std::size_t i = 0; i < 2 * nc; ++i) g2_[i] = cfg_.dt * lambda_[i];
    wbuf_.resize(grid_.total_points());
}

void Stepper::diffusion_step(std::vector<double>& u) {
    const PointwiseKernels& k = kernels();
    const std::size_t n = u.size();
    const std::size_t nc2 = lambda_.size();
    const double old_max = k.maxval(u.data(), n);
    if (!std::isfinite(old_max))
        throw std::runtime_error("Stepper: non-finite field entering step");

    if (cfg_.scheme == Scheme::exact_linear) {
        op_.forward(u.data(), *ws_u_);
        k.hadamard(g1_.data(), ws_u_->spec, ws_u_->spec, nc2);
        op_.inverse(*ws_u_, u.data());
    } else {
        const double m = params_.m;
        const double mu =
            m * std::pow(std::max(old_max, cfg_.positivity_floor), m - 1.0);
        if (cfg_.scheme == Scheme::imex) {
            const double dt = cfg_.dt;
            for (std::size_t i = 0; i < nc2; ++i)
                g2_[i] = dt * lambda_[i] / (1.0 + dt * mu * lambda_[i]);
        }
        op_.forward(u.data(), *ws_u_);
        if (m == 1.0) {
            // u^m = u: the update collapses to a diagonal factor.
            k.fused_update(g1_.data(), ws_u_->spec, g2_.data(), ws_u_->spec,
                           ws_u_->spec, nc2);
        } else {
            k.pow_m(u.data(), m, wbuf_.data(), n);
            op_.forward(wbuf_.data(), *ws_w_);
            k.fused_update(g1_.data(), ws_u_->spec, g2_.data(), ws_w_->spec,
                           ws_u_->spec, nc2);
        }
        op_.inverse(*ws_u_, u.data());
    }

    clipped_mass_ +=
        kernels().clip_floor(u.data(), cfg_.positivity_floor, n) * grid_.cell_volume();
    const double new_max = k.maxval(u.data(), n);
    if (!std::isfinite(new_max) || new_max > 10.0 * old_max + 1.0)
        throw std::runtime_error(
            "Stepper: instability detected (max grew from " +
            std::to_string(old_max) + " to " + std::to_string(new_max) +
            " in one step of dt = " + std::to_string(cfg_.dt) + ")");
    if (old_max > 0.0) max_growth_ = std::max(max_growth_, new_max / old_max);
}

void Stepper::reaction_substep(std::vector<double>& u, double dt_sub) {
    const PointwiseKernels& k = kernels();
    const std::size_t n = u.size();
    const double a = params_.reaction.fprime0;
    if (cfg_.reaction_linearized) {
        k.scale(u.data(), std::exp(a * dt_sub), n);
        return;
    }
    if (params_.reaction.kind == ReactionSpec::Kind::logistic) {
        k.logistic_map(u.data(), std::exp(a * dt_sub), n);
    } else {
        for (std::size_t i = 0; i < n; ++i)
            u[i] += dt_sub * params_.reaction(u[i]);
    }
    if (cfg_.clamp_unit) {
        clipped_above_ += k.clip_ceil(u.data(), 1.0, n) * grid_.cell_volume();
        clipped_mass_ += k.clip_floor(u.data(), 0.0, n) * grid_.cell_volume();
    }
}

void Stepper::step(Field& u) {
    if (!(u.grid == grid_)) throw std::invalid_argument("Stepper: grid mismatch");
    if (!with_reaction_) {
        diffusion_step(u.values);
    } else if (cfg_.strang) {
        reaction_substep(u.values, 0.5 * cfg_.dt);
        diffusion_step(u.values);
        reaction_substep(u.values, 0.5 * cfg_.dt);
    } else {
        diffusion_step(u.values);
        reaction_substep(u.values, cfg_.dt);
    }
    u.time += cfg_.dt;
}

SolutionTrace Stepper::run(const Field& u0) {
    const std::size_t n = grid_.total_points();
    if (u0.values.size() != n) throw std::invalid_argument("Stepper: field size mismatch");
    for (double v : u0.values) {
        if (!std::isfinite(v) || v < 0.0)
            throw std::invalid_argument("Stepper: initial data must be finite and nonnegative");
        if (with_reaction_ && !cfg_.reaction_linearized && v > 1.0 + 1e-10)
            throw std::invalid_argument("Stepper: initial data must lie in [0, 1]");
    }
    if (cfg_.scheme == Scheme::explicit_euler) {
        const double max0 = field_max(u0);
        const double bound = 0.2 * std::pow(grid_.spacing(), 2.0 * params_.s) /
                             (params_.m * std::pow(std::max(max0, cfg_.positivity_floor),
                                                   params_.m - 1.0));
        if (cfg_.dt > bound)
            throw std::invalid_argument(
                "Stepper: explicit dt " + std::to_string(cfg_.dt) +
                " violates the stability bound " + std::to_string(bound));
    }

    clipped_mass_ = clipped_above_ = 0.0;
    max_growth_ = 1.0;

    std::vector<double> snaps = cfg_.snapshot_times;
    std::sort(snaps.begin(), snaps.end());
    std::size_t next_snap = 0;

    Field u = u0;
    u.time = 0.0;
    const double vol = grid_.cell_volume();
    const PointwiseKernels& k = kernels();

    SolutionTrace trace;
    auto record = [&]() {
        trace.times.push_back(u.time);
        trace.masses.push_back(k.sum(u.values.data(), n) * vol);
        trace.maxima.push_back(k.maxval(u.values.data(), n));
        trace.minima.push_back(k.minval(u.values.data(), n));
    };
    auto snapshot_due = [&]() {
        while (next_snap < snaps.size() && u.time >= snaps[next_snap] - 0.5 * cfg_.dt) {
            trace.snapshots.push_back(u);
            ++next_snap;
        }
    };
    record();
    snapshot_due();

    const long n_steps = std::lround(cfg_.t_end / cfg_.dt);
    for (long i = 0; i < n_steps; ++i) {
        step(u);
        u.time = (i + 1) * cfg_.dt;  // avoid accumulated roundoff
        record();
        snapshot_due();
    }
    trace.clipped_mass = clipped_mass_;
    trace.clipped_above = clipped_above_;
    trace.max_step_growth = max_growth_;
    return trace;
}

Field step_fpme(const Field& u, const ModelParams& p, const StepperConfig& cfg) {
    Stepper st(u.grid, p, cfg, false);
    Field out = u;
    st.step(out);
    return out;
}

SolutionTrace run_fpme(const Field& u0, const ModelParams& p,
                       const StepperConfig& cfg) {
    Stepper st(u0.grid, p, cfg, false);
    return st.run(u0);
}

Field step_kpp(const Field& u, const ModelParams& p, const StepperConfig& cfg) {
    Stepper st(u.grid, p, cfg, true);
    Field out = u;
    st.step(out);
    return out;
}

KppRun run_kpp(const Field& u0, const ModelParams& p, const StepperConfig& cfg) {
    Stepper st(u0.grid, p, cfg, true);
    KppRun run;
    run.params = p;
    run.level_targets = cfg.level_targets;
    run.trace = st.run(u0);
    run.level_radii.assign(cfg.level_targets.size(), {});
    for (const Field& snap : run.trace.snapshots) {
        run.snapshot_times.push_back(snap.time);
        for (std::size_t j = 0; j < cfg.level_targets.size(); ++j)
            run.level_radii[j].push_back(
                level_radius(snap, cfg.level_targets[j], cfg.rays));
    }
    return run;
}

double ball_min(const Field& f, double radius) {
    const Grid& g = f.grid;
    double best = HUGE_VAL;
    if (g.dim == 1) {
        for (int i = 0; i < g.points_per_axis; ++i)
            if (std::abs(g.coord(i)) <= radius)
                best = std::min(best, f.values[static_cast<std::size_t>(i)]);
    } else {
        for (int iy = 0; iy < g.points_per_axis; ++iy) {
            const double y = g.coord(iy);
            for (int ix = 0; ix < g.points_per_axis; ++ix) {
                const double x = g.coord(ix);
                if (x * x + y * y <= radius * radius)
                    best = std::min(best, f.at2d(ix, iy));
            }
        }
    }
    if (best == HUGE_VAL)
        throw std::invalid_argument("ball_min: no grid point inside the ball");
    return best;
}

}  // namespace frackpp
