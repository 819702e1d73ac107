#include "frackpp/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "frackpp/barenblatt.hpp"
#include "frackpp/certificate.hpp"
#include "frackpp/fronts.hpp"
#include "frackpp/heat_kernel.hpp"
#include "frackpp/io.hpp"
#include "frackpp/radial_profile.hpp"
#include "frackpp/selfsim.hpp"
#include "frackpp/special.hpp"

namespace frackpp {

namespace {

using json = nlohmann::ordered_json;

// ---- check records -------------------------------------------------------

json check_target(const std::string& name, double value, double target,
                  double tol) {
    const double gap = value / target - 1.0;
    json c;
    c["name"] = name;
    c["value"] = value;
    c["target"] = target;
    c["tolerance"] = tol;
    c["relative_gap"] = gap;
    c["pass"] = std::isfinite(gap) && std::abs(gap) <= tol;
    return c;
}

json check_upper(const std::string& name, double value, double bound) {
    json c;
    c["name"] = name;
    c["value"] = value;
    c["bound"] = bound;
    c["pass"] = std::isfinite(value) && value <= bound;
    return c;
}

json check_lower(const std::string& name, double value, double bound) {
    json c;
    c["name"] = name;
    c["value"] = value;
    c["bound_low"] = bound;
    c["pass"] = std::isfinite(value) && value >= bound;
    return c;
}

json check_band(const std::string& name, double value, double lo, double hi) {
    json c;
    c["name"] = name;
    c["value"] = value;
    c["band"] = {lo, hi};
    c["pass"] = std::isfinite(value) && value >= lo && value <= hi;
    return c;
}

bool all_pass(const json& checks) {
    for (const auto& c : checks)
        if (!c.at("pass").get<bool>()) return false;
    return true;
}

// ---- typed readers (errors name the offending key) ------------------------

[[noreturn]] void key_error(const std::string& key, const std::string& what) {
    throw std::invalid_argument("config: key '" + key + "': " + what);
}

ModelParams read_model(const Config& c, double def_m, bool with_reaction) {
    ModelParams p;
    p.dim = c.get_int("dim", 1);
    if (p.dim < 1 || p.dim > 2) key_error("dim", "must be 1 or 2");
    p.s = c.get_double("s", 0.5);
    if (!(p.s > 0.0 && p.s <= 1.0)) key_error("s", "must lie in (0, 1]");
    p.m = c.get_double("m", def_m);
    if (!(p.m > 0.0) || !std::isfinite(p.m)) key_error("m", "must be positive");
    if (with_reaction) {
        const std::string kind = c.get_string("reaction", "logistic");
        if (kind != "logistic")
            key_error("reaction", "only 'logistic' is configurable here");
        const double a = c.get_double("fprime0", 1.0);
        if (!(a > 0.0) || !std::isfinite(a))
            key_error("fprime0", "must be positive");
        p.reaction = ReactionSpec::logistic(a);
    }
    p.validate();
    return p;
}

Grid read_grid(const Config& c, int dim, int def_n, double def_L) {
    const int n = c.get_int("grid.points", def_n);
    if (n < 16 || (n & (n - 1)) != 0)
        key_error("grid.points", "must be a power of two, at least 16");
    const double L = c.get_double("grid.half_length", def_L);
    if (!(L > 0.0) || !std::isfinite(L))
        key_error("grid.half_length", "must be positive");
    return Grid(dim, n, L);
}

struct StepperDefaults {
    std::string scheme = "imex";
    double dt = 1e-3;
    double t_end = 1.0;
    bool with_snapshots = false;
    double snapshot_every = 0.0;
};

StepperConfig read_stepper(const Config& c, const StepperDefaults& d) {
    StepperConfig cfg;
    const std::string sch = c.get_string("stepper.scheme", d.scheme);
    if (sch == "imex")
        cfg.scheme = Scheme::imex;
    else if (sch == "explicit" || sch == "explicit_euler")
        cfg.scheme = Scheme::explicit_euler;
    else if (sch == "exact_linear")
        cfg.scheme = Scheme::exact_linear;
    else
        key_error("stepper.scheme", "expected imex, explicit or exact_linear");
    cfg.dt = c.get_double("stepper.dt", d.dt);
    if (!(cfg.dt > 0.0)) key_error("stepper.dt", "must be positive");
    cfg.t_end = c.get_double("stepper.t_end", d.t_end);
    if (!(cfg.t_end > 0.0)) key_error("stepper.t_end", "must be positive");
    cfg.positivity_floor = c.get_double("stepper.floor", 1e-14);
    if (d.with_snapshots) {
        if (c.has("stepper.snapshots")) {
            cfg.snapshot_times = c.get_list("stepper.snapshots", {});
        } else {
            const double every =
                c.get_double("stepper.snapshot_every", d.snapshot_every);
            if (!(every > 0.0))
                key_error("stepper.snapshot_every", "must be positive");
            const int k_max = static_cast<int>(cfg.t_end / every + 1e-9);
            for (int k = 1; k <= k_max; ++k)
                cfg.snapshot_times.push_back(k * every);
        }
    }
    return cfg;
}

// ---- shared bits -----------------------------------------------------------

double radius_of(const Grid& g, std::size_t i) {
    if (g.dim == 1) return std::abs(g.coord(static_cast<int>(i)));
    const int n = g.points_per_axis;
    const double x = g.coord(static_cast<int>(i) % n);
    const double y = g.coord(static_cast<int>(i) / n);
    return std::hypot(x, y);
}

CsvTable field_table(const Field& f) {
    CsvTable t;
    t.columns = {"x", "u"};
    t.cols.resize(2);
    const int n = f.grid.points_per_axis;
    for (int i = 0; i < n; ++i) {
        t.cols[0].push_back(f.grid.coord(i));
        t.cols[1].push_back(f.values[i]);
    }
    return t;
}

// Per-step series thinned to at most max_rows rows, always keeping the ends.
CsvTable trace_table(const SolutionTrace& tr, std::size_t max_rows = 2000) {
    CsvTable t;
    t.columns = {"t", "mass", "max", "min"};
    t.cols.resize(4);
    const std::size_t n = tr.times.size();
    const std::size_t stride = std::max<std::size_t>(1, (n + max_rows - 1) / max_rows);
    for (std::size_t i = 0; i < n; i += stride) {
        t.cols[0].push_back(tr.times[i]);
        t.cols[1].push_back(tr.masses[i]);
        t.cols[2].push_back(tr.maxima[i]);
        t.cols[3].push_back(tr.minima[i]);
    }
    if ((n - 1) % stride != 0) {
        t.cols[0].push_back(tr.times[n - 1]);
        t.cols[1].push_back(tr.masses[n - 1]);
        t.cols[2].push_back(tr.maxima[n - 1]);
        t.cols[3].push_back(tr.minima[n - 1]);
    }
    return t;
}

CsvTable kpp_table(const KppRun& run, double dt) {
    CsvTable t;
    t.columns = {"t", "mass", "max", "min"};
    for (double lv : run.level_targets) t.columns.push_back("R_" + format_g17(lv));
    t.cols.resize(t.columns.size());
    for (std::size_t i = 0; i < run.snapshot_times.size(); ++i) {
        const double time = run.snapshot_times[i];
        std::size_t idx = static_cast<std::size_t>(std::llround(time / dt));
        idx = std::min(idx, run.trace.times.size() - 1);
        t.cols[0].push_back(time);
        t.cols[1].push_back(run.trace.masses[idx]);
        t.cols[2].push_back(run.trace.maxima[idx]);
        t.cols[3].push_back(run.trace.minima[idx]);
        for (std::size_t j = 0; j < run.level_targets.size(); ++j)
            t.cols[4 + j].push_back(run.level_radii[j][i]);
    }
    return t;
}

json rate_fit_json(const RateFit& fit) {
    json j;
    j["level"] = fit.level;
    j["rate"] = fit.rate;
    j["intercept"] = fit.intercept;
    j["window"] = {fit.window[0], fit.window[1]};
    j["residual"] = fit.residual;
    if (fit.target) j["target"] = *fit.target;
    if (fit.relative_gap) j["relative_gap"] = *fit.relative_gap;
    return j;
}

// Deterministic uniform in [-1, 1] independent of the standard library's
// distribution implementations.
double uniform_pm1(std::mt19937_64& eng) {
    return 2.0 * ((eng() >> 11) * 0x1.0p-53) - 1.0;
}

struct Emitter {
    const ExperimentConfig& cfg;
    std::vector<std::pair<std::string, CsvTable>> tables;
    json metrics = json::object();
    json checks = json::array();

    void add_table(const std::string& name, CsvTable t) {
        tables.emplace_back(name, std::move(t));
    }

    ExitReport finalize(const std::string& scenario) {
        for (const auto& k : cfg.raw.unused_keys())
            throw std::invalid_argument("config: unknown key '" + k + "'");
        const bool pass = all_pass(checks);
        json summary;
        summary["scenario"] = scenario;
        summary["pass"] = pass;
        summary["config"] = cfg.raw.resolved();
        summary["metrics"] = metrics;
        summary["checks"] = checks;
        json files = json::array();
        for (const auto& [name, _] : tables) files.push_back(name);
        files.push_back("summary.json");
        summary["outputs"] = files;

        ensure_directory(cfg.outputs);
        for (auto& [name, table] : tables) {
            table.metadata.insert(cfg.raw.resolved().begin(),
                                  cfg.raw.resolved().end());
            write_csv_file(table, cfg.outputs + "/" + name);
        }
        const std::string text = summary.dump(2) + "\n";
        write_text_file(cfg.outputs + "/summary.json", text);
        return {pass, text};
    }
};

// ---- scenario handlers -----------------------------------------------------

ExitReport run_kernel_table(const ExperimentConfig& cfg) {
    const Config& c = cfg.raw;
    const ModelParams& p = cfg.params;
    const int N = p.dim;
    const double s = p.s;
    const double p_tail = N + 2.0 * s;
    const double c1 = asymptotic_constant(N, s);

    const double r_lo = c.get_double("table.r_lo", 0.05);
    const double r_hi = c.get_double("table.r_hi", 400.0);
    const int points = c.get_int("table.points", 120);
    if (!(r_lo > 0.0)) key_error("table.r_lo", "must be positive");
    if (!(r_hi > r_lo)) key_error("table.r_hi", "must exceed table.r_lo");
    if (points < 16) key_error("table.points", "need at least 16");
    const bool closed_form =
        c.get_bool("table.closed_form", s == 0.5 && N == 1);
    const bool derivative = c.get_bool("table.derivative", true);

    Emitter em{cfg};

    std::vector<double> radii = log_spaced(r_lo, r_hi, points - 1);
    radii.insert(radii.begin(), 0.0);
    RadialProfile prof = kernel_profile(s, N, radii);

    CsvTable t;
    t.columns = {"r", "f", "tail_ratio", "bracket"};
    t.cols.resize(4);
    const double rel = 1e-3;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double r = radii[i];
        const double f = prof.values[i];
        double bracket = N * f;
        if (r > 0.0) {
            const double fp = (kernel_value(s, N, r * (1.0 + rel)) -
                               kernel_value(s, N, r * (1.0 - rel))) /
                              (2.0 * r * rel);
            bracket = N * f + r * fp;
        }
        t.cols[0].push_back(r);
        t.cols[1].push_back(f);
        t.cols[2].push_back(r > 0.0 ? f * std::pow(r, p_tail) : 0.0);
        t.cols[3].push_back(bracket);
    }
    em.add_table("kernel_table.csv", std::move(t));

    em.metrics["tail_constant_exact"] = c1;
    em.metrics["f0"] = prof.values[0];

    if (closed_form) {
        double worst = 0.0;
        for (int i = 0; i <= 80; ++i) {
            const double r = 0.25 * i;
            const double exact = (1.0 / M_PI) / (1.0 + r * r);
            worst = std::max(worst,
                             std::abs(kernel_value(0.5, 1, r) / exact - 1.0));
        }
        em.checks.push_back(check_upper("closed_form_max_rel", worst, 1e-6));
    }

    {
        TailLaw law = tail_fit(prof, -p_tail, r_hi / 10.0, r_hi, 2.0 * s);
        em.metrics["tail_fit_exponent"] = law.exponent;
        em.metrics["tail_fit_constant"] = law.constant_extrapolated;
        em.checks.push_back(check_target("tail_constant",
                                         law.constant_extrapolated, c1, 0.05));
    }

    if (derivative) {
        DerivativeTail dt = derivative_tail_check(s, N, log_spaced(5.0, 120.0, 25));
        em.metrics["derivative_exponent"] = dt.law.exponent;
        em.metrics["derivative_constant"] = dt.law.constant_extrapolated;
        em.metrics["derivative_bracket_negative"] = dt.bracket_negative_tail;
        em.checks.push_back(
            check_target("derivative_exponent", dt.law.exponent, -p_tail, 0.05));
        em.checks.push_back(check_target("derivative_constant",
                                         dt.law.constant_extrapolated,
                                         2.0 * s * c1, 0.10));
    }

    return em.finalize("kernel-table");
}

ExitReport run_barenblatt(const ExperimentConfig& cfg) {
    const Config& c = cfg.raw;
    const ModelParams& p = cfg.params;
    const CriticalExponents ex = critical_exponents(p);
    const Regime regime = classify_regime(p);
    const std::string mode = c.get_string("barenblatt.mode", "profile");

    Emitter em{cfg};

    if (mode == "mass_scaling") {
        const double factor = c.get_double("barenblatt.mass_factor", 2.0);
        if (!(factor > 0.0)) key_error("barenblatt.mass_factor", "must be positive");
        const double tol = c.get_double("barenblatt.scaling_tol", 0.03);
        MassScalingReport rep =
            verify_mass_scaling(factor, p, cfg.grid, cfg.stepper);
        em.metrics["max_rel_gap"] = rep.max_rel_gap;
        em.metrics["x_worst"] = rep.x_worst;
        em.metrics["t_worst"] = rep.t_worst;
        em.metrics["points_checked"] = rep.n_checked;
        em.checks.push_back(
            check_upper("mass_scaling_gap", rep.max_rel_gap, tol));
        return em.finalize("barenblatt");
    }
    if (mode != "profile")
        key_error("barenblatt.mode", "expected profile or mass_scaling");

    const double mass = c.get_double("barenblatt.mass", 1.0);
    if (!(mass > 0.0)) key_error("barenblatt.mass", "must be positive");
    const double tol = c.get_double("barenblatt.tol", 0.02);
    const double fit_lo = c.get_double("fit.r_lo", 0.0);
    const double fit_hi = c.get_double("fit.r_hi", 0.0);
    const bool corrected = c.get_bool("fit.corrected", false);
    const double gap = c.get_double("fit.gap", 1.0);

    RadialProfile prof =
        barenblatt_profile(mass, p, cfg.grid, cfg.stepper, tol);

    CsvTable t;
    t.columns = {"eta", "F"};
    t.cols = {prof.radii, prof.values};
    em.add_table("profile.csv", std::move(t));

    for (const char* key : {"alpha", "beta", "t_age", "t_final", "eta_clean",
                            "collapse_residual", "F0"})
        if (prof.meta.count(key)) em.metrics[key] = prof.meta.at(key);

    const double expected = regime == Regime::R1
                                ? -2.0 * p.s / (1.0 - p.m)
                                : -(p.dim + 2.0 * p.s);
    const double slope_tol = regime == Regime::R1 ? 0.05 : 0.03;
    TailLaw law = corrected
                      ? tail_fit_corrected(prof, expected, fit_lo, fit_hi, gap)
                      : tail_fit(prof, expected, fit_lo, fit_hi);
    em.metrics["tail_exponent"] = law.exponent;
    em.metrics["tail_constant"] = law.constant;
    em.metrics["tail_window"] = {law.window[0], law.window[1]};
    em.metrics["tail_residual"] = law.residual;
    em.metrics["alpha_exact"] = ex.alpha;
    em.metrics["beta_exact"] = ex.beta;

    em.checks.push_back(check_upper("collapse_residual",
                                    prof.meta.at("collapse_residual"), tol));
    em.checks.push_back(
        check_target("tail_exponent", law.exponent, expected, slope_tol));
    return em.finalize("barenblatt");
}

ExitReport run_lower_bound(const ExperimentConfig& cfg) {
    const Config& c = cfg.raw;
    const ModelParams& p = cfg.params;
    const double r_lo = c.get_double("lower.r_lo", 10.0);
    const double r_hi = c.get_double("lower.r_hi", 40.0);
    if (!(r_lo > 0.0)) key_error("lower.r_lo", "must be positive");
    if (!(r_hi > r_lo)) key_error("lower.r_hi", "must exceed lower.r_lo");
    const double bump = c.get_double("lower.bump_radius", 1.0);
    if (!(bump > 0.0)) key_error("lower.bump_radius", "must be positive");

    Emitter em{cfg};
    LowerParabolicReport rep = verify_lower_parabolic_estimate(
        p, cfg.grid, cfg.stepper, {r_lo, r_hi}, bump);

    em.metrics["spatial_exponent"] = rep.spatial_exponent;
    em.metrics["time_exponent"] = rep.time_exponent;
    em.metrics["c_star"] = rep.c_star;
    em.metrics["r_window"] = {rep.r_window[0], rep.r_window[1]};
    em.metrics["t_window"] = {rep.t_window[0], rep.t_window[1]};
    em.metrics["spatial_residual"] = rep.spatial_residual;
    em.metrics["time_residual"] = rep.time_residual;

    em.checks.push_back(check_target("spatial_exponent", rep.spatial_exponent,
                                     -(p.dim + 2.0 * p.s), 0.05));
    em.checks.push_back(
        check_target("time_exponent", rep.time_exponent, 1.0, 0.10));
    return em.finalize("lower-bound");
}

ExitReport run_kpp_rate(const ExperimentConfig& cfg) {
    const Config& c = cfg.raw;
    const ModelParams& p = cfg.params;
    const CriticalExponents ex = critical_exponents(p);
    const Regime regime = classify_regime(p);

    StepperConfig scfg = cfg.stepper;
    scfg.level_targets = c.get_list("levels", {0.5});
    for (double lv : scfg.level_targets)
        if (!(lv > 0.0 && lv < 1.0)) key_error("levels", "levels must lie in (0,1)");
    const double level = c.get_double("fit.level", scfg.level_targets[0]);
    const double win_lo = c.get_double("fit.window_lo", 0.0);
    const double win_hi = c.get_double("fit.window_hi", 0.0);

    scfg.strang = c.get_bool("stepper.strang", false);
    scfg.clamp_unit = c.get_bool("stepper.clamp", true);

    Field u0 = build_initial_data(c, cfg.grid, p, cfg.seed);
    KppRun run = run_kpp(u0, p, scfg);

    Emitter em{cfg};
    em.add_table("trace.csv", kpp_table(run, scfg.dt));

    const double target = regime == Regime::R1 ? *ex.sigma1 : ex.sigma2;
    std::array<double, 2> window{win_lo, win_hi};
    if (!(win_lo > 0.0 && win_hi > win_lo))
        window = default_fit_window(run, level);
    RateFit fit = fit_rate(run, level, window, target);

    em.metrics["fit"] = rate_fit_json(fit);
    em.metrics["sigma2"] = ex.sigma2;
    if (ex.sigma1) em.metrics["sigma1"] = *ex.sigma1;
    if (ex.sigma3) em.metrics["sigma3"] = *ex.sigma3;
    em.metrics["regime"] = regime_name(regime);
    em.metrics["clipped_above"] = run.trace.clipped_above;

    if (regime == Regime::R3) {
        const double tol = c.get_double("fit.tolerance", 0.10);
        em.checks.push_back(check_band("rate", fit.rate,
                                       (1.0 - tol) * ex.sigma2,
                                       (1.0 + tol) * *ex.sigma3));
    } else {
        const double def_tol = regime == Regime::R1 ? 0.15 : 0.10;
        const double tol = c.get_double("fit.tolerance", def_tol);
        em.checks.push_back(check_target("rate", fit.rate, target, tol));
    }
    return em.finalize("kpp-rate");
}

ExitReport run_certificate(const ExperimentConfig& cfg) {
    const Config& c = cfg.raw;
    const ModelParams& p = cfg.params;
    const CriticalExponents ex = critical_exponents(p);

    double sigma = c.get_double("cert.sigma", 0.0);
    if (sigma <= 0.0) {
        const double frac = c.get_double("cert.sigma_frac", 0.5);
        if (!(frac > 0.0 && frac < 1.0))
            key_error("cert.sigma_frac", "must lie in (0, 1)");
        sigma = frac * ex.sigma2;
    }
    const double eps = c.get_double("cert.eps", 0.0);
    const double rho0 = c.get_double("cert.rho0", 1.0);
    const int k_max = c.get_int("cert.k_max", 20);
    if (k_max < 1) key_error("cert.k_max", "must be at least 1");
    const double tol_l = c.get_double("cert.tol_L", 0.01);

    Emitter em{cfg};
    CertificateState st = certificate_run(p, sigma, eps, rho0, k_max);

    CsvTable t;
    t.columns = {"k", "rho", "L"};
    t.cols.resize(3);
    for (int k = 0; k < k_max; ++k) {
        t.cols[0].push_back(k);
        t.cols[1].push_back(st.rho[k]);
        t.cols[2].push_back(st.L[k]);
    }
    em.add_table("certificate.csv", std::move(t));

    em.metrics["sigma"] = st.sigma;
    em.metrics["sigma2"] = ex.sigma2;
    em.metrics["delta"] = st.delta;
    em.metrics["t0"] = st.t0;
    em.metrics["eps0"] = st.eps0;
    em.metrics["eps"] = st.eps;
    em.metrics["M1"] = st.M1;
    em.metrics["tau1"] = st.tau1;
    em.metrics["L_inf"] = st.L_inf;
    em.metrics["rho_final"] = st.rho.back();

    double min_ratio = 1e300;
    for (int k = 0; k < k_max; ++k)
        min_ratio = std::min(min_ratio, st.rho[k + 1] / st.rho[k]);
    em.checks.push_back(check_lower("expansion_factor", min_ratio,
                                    std::exp(st.sigma * st.t0)));
    em.checks.push_back(check_upper(
        "L_convergence", std::abs(st.L.back() / st.L_inf - 1.0), tol_l));
    em.checks.push_back(check_upper("eps_within_eps0", st.eps, st.eps0));
    return em.finalize("certificate");
}

ExitReport run_selfsim(const ExperimentConfig& cfg) {
    const Config& c = cfg.raw;
    const ModelParams& p = cfg.params;
    const double gamma = c.get_double("selfsim.gamma", 0.5);
    if (!(gamma > 0.0 && gamma < 2.0 * p.s))
        key_error("selfsim.gamma", "must lie in (0, 2s)");
    const double eta_lo = c.get_double("selfsim.eta_lo", 0.01);
    const double eta_hi = c.get_double("selfsim.eta_hi", 1000.0);
    if (!(eta_lo > 0.0)) key_error("selfsim.eta_lo", "must be positive");
    if (!(eta_hi > 10.0 * eta_lo))
        key_error("selfsim.eta_hi", "must exceed 10 selfsim.eta_lo");
    const int points = c.get_int("selfsim.points", 200);
    if (points < 32) key_error("selfsim.points", "need at least 32");
    const bool evolution = c.get_bool("selfsim.evolution", true);
    const double flat_tol = c.get_double("selfsim.flatness_tol", 0.05);
    const double collapse_tol = c.get_double("selfsim.collapse_tol", 0.03);
    const double alpha_tol = c.get_double("selfsim.alpha_tol", 0.03);
    StepperConfig scfg;
    scfg.dt = c.get_double("stepper.dt", 0.025);
    scfg.t_end = c.get_double("stepper.t_end", 1.0);

    Emitter em{cfg};
    const SelfSimExponents exps = selfsim_exponents(gamma, p.s);
    KernelSpline kernel(p.s, p.dim);
    RadialProfile prof =
        selfsim_profile(gamma, kernel, log_spaced(eta_lo, eta_hi, points));
    DerivBoundReport db = profile_derivative_bound(prof, gamma);

    CsvTable t;
    t.columns = {"eta", "F", "tail_ratio", "deriv_bound_ratio"};
    t.cols.resize(4);
    for (std::size_t i = 0; i < db.etas.size(); ++i) {
        const double eta = db.etas[i];
        const double F = prof.values[i + 1];
        t.cols[0].push_back(eta);
        t.cols[1].push_back(F);
        t.cols[2].push_back(F / std::pow(eta, gamma));
        t.cols[3].push_back(db.ratios[i]);
    }
    em.add_table("selfsim_profile.csv", std::move(t));

    em.metrics["alpha1"] = exps.alpha1;
    em.metrics["beta1"] = exps.beta1;
    em.metrics["F0"] = prof.meta.at("F0");
    em.metrics["deriv_bound_sup"] = db.sup_ratio;
    em.metrics["deriv_bound_window"] = {db.window[0], db.window[1]};
    em.metrics["mono_tolerance"] = db.mono_tolerance;

    double lo = 1e300, hi = 0.0;
    for (std::size_t i = 0; i < prof.radii.size(); ++i) {
        if (prof.radii[i] < eta_hi / 10.0) continue;
        const double q = prof.values[i] / std::pow(prof.radii[i], gamma);
        lo = std::min(lo, q);
        hi = std::max(hi, q);
    }
    em.metrics["tail_constant_low"] = lo;
    em.metrics["tail_constant_high"] = hi;
    em.checks.push_back(
        check_upper("monotonicity_violations",
                    static_cast<double>(db.monotonicity_violations), 0.0));
    em.checks.push_back(check_upper("tail_flatness", hi / lo - 1.0, flat_tol));
    em.checks.push_back(check_upper("two_sided_ratio", hi / lo, 1.2));

    if (evolution) {
        SelfSimEvolutionReport rep = selfsim_evolution_check(gamma, p.s, scfg);
        em.metrics["evolution_collapse_max_rel"] = rep.collapse_max_rel;
        em.metrics["evolution_boundary_max_rel"] = rep.boundary_max_rel;
        em.metrics["evolution_alpha1_fitted"] = rep.alpha1_fitted;
        em.metrics["evolution_eta_max"] = rep.eta_max;
        em.metrics["evolution_t_window"] = {rep.t_window[0], rep.t_window[1]};
        em.metrics["evolution_snapshots_used"] = rep.snapshots_used;
        em.checks.push_back(check_upper("evolution_collapse",
                                        rep.collapse_max_rel, collapse_tol));
        em.checks.push_back(check_target("evolution_alpha1", rep.alpha1_fitted,
                                         exps.alpha1, alpha_tol));
    }
    return em.finalize("selfsim");
}

ExitReport run_reaction_only(const ExperimentConfig& cfg) {
    const Config& c = cfg.raw;
    const ModelParams& p = cfg.params;
    const double a = p.reaction.fprime0;
    const double p_tail = p.dim + 2.0 * p.s;

    const std::string tail_name = c.get_string("react.tail", "power");
    TailKind tail;
    if (tail_name == "power")
        tail = TailKind::power;
    else if (tail_name == "gaussian")
        tail = TailKind::gaussian;
    else
        key_error("react.tail", "expected power or gaussian");
    const double amp = c.get_double("react.amplitude", 1.0);
    if (!(amp > 0.0)) key_error("react.amplitude", "must be positive");
    const double lambda = c.get_double("react.lambda", 0.5);
    if (!(lambda > 0.0 && lambda < 1.0))
        key_error("react.lambda", "must lie in (0, 1)");
    const double t_end = c.get_double("react.t_end", 10.0);
    if (!(t_end > 0.0)) key_error("react.t_end", "must be positive");
    const int points = c.get_int("react.points", 21);
    if (points < 5) key_error("react.points", "need at least 5");

    std::vector<double> times(points);
    for (int i = 0; i < points; ++i)
        times[i] = t_end * i / (points - 1);

    Emitter em{cfg};
    std::vector<double> radii =
        reaction_only_levels(tail, p, lambda, times, amp);

    CsvTable t;
    t.columns = {"t", "R"};
    t.cols = {times, radii};
    em.add_table("levels.csv", std::move(t));

    // Substitute the closed form back into the defining level equation
    // u0(R) e^{a t} = lambda.
    double worst = 0.0;
    for (int i = 0; i < points; ++i) {
        if (!(radii[i] > 0.0)) continue;
        const double u0 = tail == TailKind::power
                              ? amp * std::pow(radii[i], -p_tail)
                              : amp * std::exp(-radii[i] * radii[i]);
        worst = std::max(worst,
                         std::abs(u0 * std::exp(a * times[i]) / lambda - 1.0));
    }
    em.checks.push_back(check_upper("level_identity_max_rel", worst, 1e-10));

    if (tail == TailKind::power) {
        std::vector<double> ts, logs;
        for (int i = 0; i < points; ++i)
            if (radii[i] > 0.0) {
                ts.push_back(times[i]);
                logs.push_back(std::log(radii[i]));
            }
        const LinFit lf = linfit(ts, logs);
        em.metrics["rate"] = lf.slope;
        em.metrics["rate_exact"] = a / p_tail;
        em.checks.push_back(
            check_target("rate", lf.slope, a / p_tail, 1e-9));
    }
    em.metrics["R_final"] = radii.back();
    return em.finalize("reaction-only");
}

}  // namespace

// ---- public entry points ---------------------------------------------------

Scenario scenario_from_name(const std::string& name) {
    if (name == "kernel-table") return Scenario::kernel_table;
    if (name == "barenblatt") return Scenario::barenblatt;
    if (name == "lower-bound") return Scenario::lower_bound;
    if (name == "kpp-rate") return Scenario::kpp_rate;
    if (name == "certificate") return Scenario::certificate;
    if (name == "selfsim") return Scenario::selfsim;
    if (name == "reaction-only") return Scenario::reaction_only;
    throw std::invalid_argument(
        "unknown scenario '" + name +
        "' (expected kernel-table, barenblatt, lower-bound, kpp-rate, "
        "certificate, selfsim or reaction-only)");
}

std::string scenario_name(Scenario sc) {
    switch (sc) {
        case Scenario::kernel_table: return "kernel-table";
        case Scenario::barenblatt: return "barenblatt";
        case Scenario::lower_bound: return "lower-bound";
        case Scenario::kpp_rate: return "kpp-rate";
        case Scenario::certificate: return "certificate";
        case Scenario::selfsim: return "selfsim";
        case Scenario::reaction_only: return "reaction-only";
    }
    throw std::logic_error("scenario_name: bad enum");
}

ExperimentConfig experiment_from_config(Scenario sc, Config c) {
    ExperimentConfig ec;
    ec.scenario = sc;
    const std::string name = scenario_name(sc);
    c.note("scenario", name);
    ec.seed = c.get_int("seed", 0);
    ec.outputs = c.get_string("output.dir", "out/" + name);

    switch (sc) {
        case Scenario::kernel_table:
            ec.params = read_model(c, 1.0, false);
            break;
        case Scenario::barenblatt:
            ec.params = read_model(c, 2.0, false);
            ec.grid = read_grid(c, ec.params.dim, 4096, 1024.0);
            ec.stepper = read_stepper(c, {"imex", 2e-3, 10.0, false, 0.0});
            break;
        case Scenario::lower_bound:
            ec.params = read_model(c, 2.0, false);
            ec.grid = read_grid(c, ec.params.dim, 4096, 256.0);
            ec.stepper = read_stepper(c, {"imex", 1e-4, 0.1, false, 0.0});
            break;
        case Scenario::kpp_rate:
            ec.params = read_model(c, 1.0, true);
            ec.grid = read_grid(c, ec.params.dim, 8192, 16384.0);
            ec.stepper = read_stepper(c, {"imex", 1e-3, 15.0, true, 0.5});
            break;
        case Scenario::certificate:
            ec.params = read_model(c, 0.75, true);
            break;
        case Scenario::selfsim:
            ec.params = read_model(c, 1.0, false);
            break;
        case Scenario::reaction_only:
            ec.params = read_model(c, 1.0, true);
            break;
    }
    ec.raw = std::move(c);
    return ec;
}

ExitReport run_experiment(const ExperimentConfig& cfg) {
    switch (cfg.scenario) {
        case Scenario::kernel_table: return run_kernel_table(cfg);
        case Scenario::barenblatt: return run_barenblatt(cfg);
        case Scenario::lower_bound: return run_lower_bound(cfg);
        case Scenario::kpp_rate: return run_kpp_rate(cfg);
        case Scenario::certificate: return run_certificate(cfg);
        case Scenario::selfsim: return run_selfsim(cfg);
        case Scenario::reaction_only: return run_reaction_only(cfg);
    }
    throw std::logic_error("run_experiment: bad enum");
}

ExitReport run_scenario(const std::string& name, Config c) {
    return run_experiment(experiment_from_config(scenario_from_name(name),
                                                 std::move(c)));
}

Field build_initial_data(const Config& c, const Grid& g, const ModelParams& p,
                         long seed) {
    const std::string kind = c.get_string("init.kind", "gaussian");
    const double eps = c.get_double("init.eps", 0.15);
    if (!(eps > 0.0)) key_error("init.eps", "must be positive");
    const double width = c.get_double("init.width", 4.0);
    if (!(width > 0.0)) key_error("init.width", "must be positive");
    const double perturb = c.get_double("init.perturb", 0.0);
    if (perturb < 0.0 || perturb >= 1.0)
        key_error("init.perturb", "must lie in [0, 1)");

    Field u0(g);
    if (kind == "gaussian") {
        for (std::size_t i = 0; i < u0.values.size(); ++i) {
            const double r = radius_of(g, i);
            u0.values[i] = eps * std::exp(-r * r / width);
        }
    } else if (kind == "power") {
        const double q =
            c.get_double("init.exponent", p.dim + 2.0 * p.s);
        if (!(q > p.dim)) key_error("init.exponent", "must exceed dim");
        for (std::size_t i = 0; i < u0.values.size(); ++i) {
            const double r = radius_of(g, i);
            u0.values[i] = eps * std::pow(1.0 + r * r, -0.5 * q);
        }
    } else if (kind == "indicator") {
        for (std::size_t i = 0; i < u0.values.size(); ++i)
            u0.values[i] = radius_of(g, i) <= width ? eps : 0.0;
    } else if (kind == "file") {
        const std::string path = c.get_string("init.file", "");
        if (path.empty()) key_error("init.file", "path required for init.kind=file");
        if (g.dim != 1) key_error("init.kind", "file data supports 1D only");
        CsvTable t = read_csv_file(path);
        auto xi = std::find(t.columns.begin(), t.columns.end(), "x");
        auto ui = std::find(t.columns.begin(), t.columns.end(), "u");
        if (xi == t.columns.end() || ui == t.columns.end())
            key_error("init.file", "needs columns x and u");
        const auto& xs = t.cols[xi - t.columns.begin()];
        const auto& us = t.cols[ui - t.columns.begin()];
        if (!std::is_sorted(xs.begin(), xs.end()))
            key_error("init.file", "x column must be sorted");
        for (int i = 0; i < g.points_per_axis; ++i) {
            const double x = g.coord(i);
            const auto it = std::upper_bound(xs.begin(), xs.end(), x);
            if (it == xs.begin() || it == xs.end()) continue;
            const std::size_t hi = it - xs.begin();
            const double w = (x - xs[hi - 1]) / (xs[hi] - xs[hi - 1]);
            u0.values[i] = (1.0 - w) * us[hi - 1] + w * us[hi];
        }
    } else {
        key_error("init.kind", "expected gaussian, power, indicator or file");
    }

    if (perturb > 0.0) {
        std::mt19937_64 eng(static_cast<std::uint64_t>(seed));
        for (double& v : u0.values) {
            v *= 1.0 + perturb * uniform_pm1(eng);
            v = std::max(v, 0.0);
        }
    }
    return u0;
}

ExitReport run_fpme_trace(Config c) {
    c.note("scenario", "fpme-run");
    ExperimentConfig ec;
    ec.seed = c.get_int("seed", 0);
    ec.outputs = c.get_string("output.dir", "out/fpme-run");
    ec.params = read_model(c, 2.0, false);
    ec.grid = read_grid(c, ec.params.dim, 512, 64.0);
    ec.stepper = read_stepper(c, {"imex", 1e-3, 1.0, true, 0.25});
    Field u0 = build_initial_data(c, ec.grid, ec.params, ec.seed);
    ec.raw = std::move(c);

    SolutionTrace tr = run_fpme(u0, ec.params, ec.stepper);

    Emitter em{ec};
    em.add_table("trace.csv", trace_table(tr));
    if (ec.grid.dim == 1 && !tr.snapshots.empty())
        em.add_table("final_state.csv", field_table(tr.snapshots.back()));

    const double drift = std::abs(tr.masses.back() / tr.masses.front() - 1.0);
    em.metrics["mass_initial"] = tr.masses.front();
    em.metrics["mass_final"] = tr.masses.back();
    em.metrics["clipped_mass"] = tr.clipped_mass;
    em.metrics["max_step_growth"] = tr.max_step_growth;
    em.checks.push_back(check_upper("mass_drift", drift, 1e-7));
    em.checks.push_back(check_lower("min_value", *std::min_element(
        tr.minima.begin(), tr.minima.end()), 0.0));
    return em.finalize("fpme-run");
}

ExitReport run_kpp_trace(Config c) {
    c.note("scenario", "kpp-run");
    ExperimentConfig ec;
    ec.seed = c.get_int("seed", 0);
    ec.outputs = c.get_string("output.dir", "out/kpp-run");
    ec.params = read_model(c, 1.0, true);
    ec.grid = read_grid(c, ec.params.dim, 8192, 16384.0);
    ec.stepper = read_stepper(c, {"imex", 1e-3, 15.0, true, 0.5});
    ec.stepper.level_targets = c.get_list("levels", {0.5});
    for (double lv : ec.stepper.level_targets)
        if (!(lv > 0.0 && lv < 1.0)) key_error("levels", "levels must lie in (0,1)");
    ec.stepper.strang = c.get_bool("stepper.strang", false);
    ec.stepper.clamp_unit = c.get_bool("stepper.clamp", true);
    Field u0 = build_initial_data(c, ec.grid, ec.params, ec.seed);
    ec.raw = std::move(c);

    KppRun run = run_kpp(u0, ec.params, ec.stepper);

    Emitter em{ec};
    em.add_table("trace.csv", kpp_table(run, ec.stepper.dt));
    em.metrics["final_max"] = run.trace.maxima.back();
    em.metrics["final_min"] = run.trace.minima.back();
    json finals = json::object();
    for (std::size_t j = 0; j < run.level_targets.size(); ++j)
        finals["R_" + format_g17(run.level_targets[j])] =
            run.level_radii[j].back();
    em.metrics["final_radii"] = finals;
    em.checks.push_back(
        check_upper("invariant_region_max",
                    *std::max_element(run.trace.maxima.begin(),
                                      run.trace.maxima.end()),
                    1.0 + 1e-12));
    em.checks.push_back(check_lower("invariant_region_min",
                                    *std::min_element(run.trace.minima.begin(),
                                                      run.trace.minima.end()),
                                    0.0));
    return em.finalize("kpp-run");
}

ExitReport run_fit_rate(Config c, const std::string& csv_path) {
    c.note("scenario", "fit-rate");
    c.note("input", csv_path);
    ExperimentConfig ec;
    ec.outputs = c.get_string("output.dir", "out/fit-rate");

    CsvTable t = read_csv_file(csv_path);
    const auto col = [&](const std::string& name) -> const std::vector<double>* {
        for (std::size_t j = 0; j < t.columns.size(); ++j)
            if (t.columns[j] == name) return &t.cols[j];
        return nullptr;
    };
    const std::vector<double>* times = col("t");
    if (!times) throw std::invalid_argument("fit-rate: trace lacks column t");

    KppRun run;
    run.snapshot_times = *times;
    run.trace.times = {times->empty() ? 0.0 : times->back()};
    for (std::size_t j = 0; j < t.columns.size(); ++j) {
        const std::string& name = t.columns[j];
        if (name.rfind("R_", 0) != 0) continue;
        run.level_targets.push_back(std::stod(name.substr(2)));
        run.level_radii.push_back(t.cols[j]);
    }
    if (run.level_targets.empty())
        throw std::invalid_argument("fit-rate: trace has no R_<level> columns");

    const double level = c.get_double("fit.level", run.level_targets[0]);
    const double win_lo = c.get_double("fit.window_lo", 0.0);
    const double win_hi = c.get_double("fit.window_hi", 0.0);
    std::array<double, 2> window{win_lo, win_hi};
    if (!(win_lo > 0.0 && win_hi > win_lo)) {
        const auto meta = [&](const std::string& key) {
            const auto it = t.metadata.find(key);
            if (it == t.metadata.end())
                throw std::invalid_argument(
                    "fit-rate: trace metadata lacks '" + key +
                    "'; pass fit.window_lo and fit.window_hi instead");
            return std::stod(it->second);
        };
        const Grid g(static_cast<int>(meta("dim")),
                     static_cast<int>(meta("grid.points")),
                     meta("grid.half_length"));
        run.trace.snapshots.emplace_back(g);
        window = default_fit_window(run, level);
    }

    std::optional<double> target;
    if (c.has("fit.target")) target = c.get_double("fit.target", 0.0);
    RateFit fit = fit_rate(run, level, window, target);

    Emitter em{ec};
    em.metrics["fit"] = rate_fit_json(fit);
    if (c.has("fit.tolerance")) {
        const double tol = c.get_double("fit.tolerance", 0.1);
        if (!target)
            throw std::invalid_argument(
                "config: key 'fit.tolerance': requires fit.target");
        em.checks.push_back(check_target("rate", fit.rate, *target, tol));
    }
    ec.raw = std::move(c);
    return em.finalize("fit-rate");
}

}  // namespace frackpp
