#include "frackpp/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "frackpp/barenblatt.hpp"
#include "frackpp/grid.hpp"
#include "frackpp/stepper.hpp"

namespace frackpp {

namespace {

double meta_value(const RadialProfile& p, const char* key) {
    auto it = p.meta.find(key);
    if (it == p.meta.end())
        throw std::invalid_argument(std::string("profile_constants_from: profile lacks meta key ") + key);
    return it->second;
}

// Piecewise-linear read of a sampled radial profile; constant below the first
// sample, K1 power tail beyond the last.
double profile_value(const RadialProfile& prof, double r, double k1, double p_tail) {
    const auto& rr = prof.radii;
    const auto& vv = prof.values;
    if (r <= rr.front()) return vv.front();
    if (r >= rr.back()) return k1 * std::pow(r, -p_tail);
    const auto it = std::upper_bound(rr.begin(), rr.end(), r);
    const std::size_t i = static_cast<std::size_t>(it - rr.begin());
    const double w = (r - rr[i - 1]) / (rr[i] - rr[i - 1]);
    return vv[i - 1] + w * (vv[i] - vv[i - 1]);
}

}  // namespace

ProfileConstants profile_constants_from(const RadialProfile& profile) {
    profile.validate();
    const double s = meta_value(profile, "s");
    const double p_tail = profile.dim + 2.0 * s;
    const double r_clean = meta_value(profile, "eta_clean");
    if (!(r_clean > 0.0) || r_clean > profile.radii.back() * (1.0 + 1e-9))
        throw std::invalid_argument("profile_constants_from: wrap-free horizon missing or beyond samples");

    ProfileConstants pc;
    pc.F0 = profile.values.front();
    auto it = profile.meta.find("collapse_residual");
    pc.collapse_residual = it == profile.meta.end() ? 0.0 : it->second;
    if (!(pc.F0 > 0.0))
        throw std::invalid_argument("profile_constants_from: nonpositive peak value");

    const double r_lo = std::max(0.15 * r_clean, profile.radii[std::min<std::size_t>(3, profile.radii.size() - 1)]);
    double sup = 0.0, inf = std::numeric_limits<double>::infinity();
    int n_window = 0;
    for (std::size_t i = 0; i < profile.radii.size(); ++i) {
        const double r = profile.radii[i];
        if (r > r_clean) break;
        const double v = profile.values[i];
        if (v > 0.0) inf = std::min(inf, v * (1.0 + std::pow(r, p_tail)));
        if (r >= r_lo && v > 0.0) {
            sup = std::max(sup, v * std::pow(r, p_tail));
            ++n_window;
        }
    }
    if (n_window < 8 || !(sup > 0.0) || !std::isfinite(inf))
        throw std::invalid_argument("profile_constants_from: too few positive samples in the tail window");
    pc.K1 = 1.02 * sup;
    pc.K2 = 0.98 * inf;
    pc.tail_window = {r_lo, r_clean};
    return pc;
}

ProfileConstants calibrate_profile_constants(const ModelParams& p) {
    p.validate();
    if (p.dim != 1)
        throw std::invalid_argument(
            "calibrate_profile_constants: presets cover dim 1; for other dims run "
            "barenblatt_profile and profile_constants_from directly");
    Grid g(1, 1024, 256.0);
    StepperConfig cfg;
    if (p.m >= 1.0) {
        cfg.dt = 2e-3;
        cfg.t_end = 10.0;
    } else {
        cfg.dt = 1e-3;
        cfg.t_end = 1.2;
    }
    // tol = 1: the envelope constants need the tail, not a tight collapse gate;
    // the achieved residual is reported instead.
    RadialProfile prof = barenblatt_profile(1.0, p, g, cfg, 1.0);
    return profile_constants_from(prof);
}

CertificateState certificate_run(const ModelParams& p, double sigma, double eps,
                                 double rho0, int k_max,
                                 const ProfileConstants& pc) {
    p.validate();
    const double m = p.m;
    const double s = p.s;
    const double N = p.dim;
    const double p_tail = N + 2.0 * s;
    if (m <= p.m_one())
        throw std::invalid_argument("certificate_run: requires the tail regime m > m_1");
    const CriticalExponents ex = critical_exponents(p);
    const double beta = ex.beta;
    const double sigma2 = ex.sigma2;
    const double a = p.reaction.fprime0;
    if (!(sigma > 0.0) || sigma >= sigma2 * (1.0 - 1e-12))
        throw std::invalid_argument("certificate_run: sigma must lie in (0, sigma2)");
    if (!(rho0 >= 1.0))
        throw std::invalid_argument("certificate_run: rho0 >= 1 required");
    if (k_max < 1 || k_max > 100000)
        throw std::invalid_argument("certificate_run: k_max out of range");
    if (!(pc.K1 > 0.0) || !(pc.K2 > 0.0) || !(pc.F0 > 0.0))
        throw std::invalid_argument("certificate_run: profile constants not calibrated");
    if (!(pc.K2 < 2.0 * pc.K1))
        throw std::invalid_argument("certificate_run: profile envelope requires K2 < 2 K1");

    CertificateState st;
    st.sigma = sigma;

    // Linearization threshold: f(delta)/((N+2s) delta) at the midpoint between
    // sigma2 and the larger of sigma and N(m-1) beta sigma2.
    const double lam = N * (m - 1.0) * beta * sigma2;
    const double target_q = 0.5 * (sigma2 + std::max(sigma, lam));
    {
        double lo = 1e-12, hi = 1.0 - 1e-12;
        const auto g_of = [&](double d) { return p.reaction(d) / (p_tail * d) - target_q; };
        if (!(g_of(lo) > 0.0) || !(g_of(hi) < 0.0))
            throw std::runtime_error("certificate_run: no admissible delta (sigma too close to sigma2)");
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            (g_of(mid) > 0.0 ? lo : hi) = mid;
        }
        st.delta = 0.5 * (lo + hi);
    }
    const double q = p.reaction(st.delta) / st.delta;  // f(delta)/delta

    const double c1 = std::pow(pc.F0, -2.0 * s / p_tail) * std::pow(pc.K1, -N / p_tail);
    const double c2 = std::pow(pc.F0, (m - 1.0) + 2.0 * s / p_tail) * std::pow(pc.K1, -2.0 * s / p_tail);
    const double c3 = std::pow(c1, (m - 1.0) * beta) * std::pow(c2, beta);
    const double log_K3 = std::log(2.0 * pc.K1 / pc.K2) + p_tail * std::log(c3);

    // Waiting time: smallest t >= 1 with
    //  (A)  q t - N beta log(1 + tau/tau_1(1)) >= log K3,
    //       tau = tau(t) for m >= 1 and the saturation value for m < 1,
    //  (B)  (K2/2K1)^{1/(N+2s)} e^{q t/(N+2s)} >= e^{sigma t}.
    const bool auto_eps = !(eps > 0.0);
    const auto eps_at = [&](double t) { return auto_eps ? st.delta * std::exp(-a * t) : eps; };
    const auto cond_a = [&](double t) {
        const double tau = m >= 1.0 ? tau_rescale(t, m, a) : 1.0 / ((1.0 - m) * a);
        const double tau11 = c2 * std::pow(eps_at(t), 1.0 - m);
        return q * t - N * beta * std::log1p(tau / tau11) >= log_K3;
    };
    const auto cond_b = [&](double t) {
        return std::log(pc.K2 / (2.0 * pc.K1)) / p_tail + q * t / p_tail >= sigma * t;
    };
    const auto feasible = [&](double t) { return cond_a(t) && cond_b(t); };
    {
        const double step = 0.01;
        const double t_scan_max = std::max(400.0 / a, 100.0);
        double t_hit = -1.0, t_prev = 1.0;
        if (feasible(1.0)) {
            t_hit = 1.0;
        } else {
            for (double t = 1.0 + step; t <= t_scan_max; t += step) {
                if (feasible(t)) { t_hit = t; break; }
                t_prev = t;
            }
        }
        if (t_hit < 0.0)
            throw std::runtime_error("certificate_run: no waiting time t0 below the scan horizon");
        if (t_hit > 1.0) {
            double lo = t_prev, hi = t_hit;
            for (int i = 0; i < 80; ++i) {
                const double mid = 0.5 * (lo + hi);
                (feasible(mid) ? hi : lo) = mid;
            }
            t_hit = hi;
        }
        st.t0 = std::max(1.0, 1.01 * t_hit);
        while (!feasible(st.t0)) {
            st.t0 += step;
            if (st.t0 > t_scan_max)
                throw std::runtime_error("certificate_run: no waiting time t0 below the scan horizon");
        }
    }
    st.eps0 = st.delta * std::exp(-a * st.t0);
    st.eps = auto_eps ? st.eps0 : eps;
    if (st.eps > st.eps0 * (1.0 + 1e-12))
        throw std::runtime_error("certificate_run: eps exceeds the admissible height eps0 = " +
                                 std::to_string(st.eps0));

    st.M1 = c1 * st.eps * std::pow(rho0, N);
    st.tau1 = c2 * std::pow(st.eps, 1.0 - m) * std::pow(rho0, 2.0 * s);
    st.L_inf = std::pow(pc.K2 / (2.0 * pc.K1), 1.0 / p_tail) * std::exp(q * st.t0 / p_tail);
    if (st.L_inf < std::exp(sigma * st.t0) * (1.0 - 1e-9))
        throw std::runtime_error("certificate_run: expansion ratio fell below e^{sigma t0}");

    const double tau0 = tau_rescale(st.t0, m, a);
    const double log_tau11 = std::log(c2) + (1.0 - m) * std::log(st.eps);
    double log_rho = std::log(rho0);
    st.rho.reserve(static_cast<std::size_t>(k_max) + 1);
    st.L.reserve(static_cast<std::size_t>(k_max));
    st.rho.push_back(rho0);
    for (int k = 0; k < k_max; ++k) {
        const double ratio = tau0 * std::exp(-(log_tau11 + 2.0 * s * log_rho));
        const double lk = st.L_inf * std::pow(1.0 + ratio, 2.0 * s * beta / p_tail);
        st.L.push_back(lk);
        log_rho += std::log(lk);
        st.rho.push_back(std::exp(log_rho));
    }
    return st;
}

CertificateState certificate_run(const ModelParams& p, double sigma, double eps,
                                 double rho0, int k_max) {
    return certificate_run(p, sigma, eps, rho0, k_max, calibrate_profile_constants(p));
}

double certificate_soundness(const CertificateState& st, const ModelParams& p,
                             const ProfileConstants& pc,
                             const RadialProfile& profile, double r_max) {
    const CriticalExponents ex = critical_exponents(p);
    const double s = p.s;
    const double p_tail = p.dim + 2.0 * s;
    const double rho0 = st.rho.at(0);
    if (!(r_max > rho0))
        throw std::invalid_argument("certificate_soundness: r_max must exceed rho0");
    const double stretch = std::pow(std::pow(st.M1, p.m - 1.0) * st.tau1, -ex.beta);
    const double amp = std::pow(st.M1, 2.0 * ex.beta * s) * std::pow(st.tau1, -ex.alpha);

    const auto margin_at = [&](double r) {
        const double v0 = st.eps * std::min(1.0, std::pow(rho0 / r, p_tail));
        const double b = amp * profile_value(profile, stretch * r, pc.K1, p_tail);
        return (v0 - b) / st.eps;
    };
    double worst = (st.eps - amp * profile.values.front()) / st.eps;  // r = 0
    for (double r : log_spaced(1e-3 * rho0, r_max, 400))
        worst = std::min(worst, margin_at(r));
    return worst;
}

}  // namespace frackpp
