#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "frackpp/barenblatt.hpp"
#include "frackpp/grid.hpp"
#include "frackpp/params.hpp"
#include "frackpp/radial_profile.hpp"
#include "frackpp/stepper.hpp"

using namespace frackpp;

namespace {

Field gaussian_bump(const Grid& g, double amp, double width) {
    Field u(g);
    for (int i = 0; i < g.points_per_axis; ++i) {
        const double x = g.coord(i);
        u.values[i] = amp * std::exp(-x * x / width);
    }
    return u;
}

ModelParams pure(double m, double s = 0.5) {
    ModelParams p;
    p.m = m;
    p.s = s;
    return p;
}

}  // namespace

TEST_CASE("mass is conserved to rounding over a thousand steps") {
    Grid g(1, 256, 32.0);
    StepperConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 1.0;
    for (double m : {0.75, 1.0, 2.0}) {
        SolutionTrace tr = run_fpme(gaussian_bump(g, 1.0, 2.0), pure(m), cfg);
        REQUIRE(tr.times.size() >= 1000);
        const double drift =
            std::abs(tr.masses.back() / tr.masses.front() - 1.0);
        CHECK(drift <= 1e-7);
        CHECK(tr.clipped_mass <= 1e-12);
    }
}

TEST_CASE("solution stays nonnegative and the maximum decays") {
    Grid g(1, 256, 32.0);
    StepperConfig cfg;
    cfg.dt = 2e-3;
    cfg.t_end = 1.0;
    for (double m : {0.75, 2.0}) {
        SolutionTrace tr = run_fpme(gaussian_bump(g, 1.0, 2.0), pure(m), cfg);
        for (double mn : tr.minima) CHECK(mn >= 0.0);
        CHECK(tr.max_step_growth <= 1.0 + 1e-12);
        CHECK(tr.maxima.back() < tr.maxima.front());
    }
}

TEST_CASE("comparison principle holds to discretization rounding") {
    Grid g(1, 256, 32.0);
    StepperConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 0.25;
    for (double t = 0.05; t <= 0.25 + 1e-12; t += 0.05)
        cfg.snapshot_times.push_back(t);
    for (double m : {0.75, 2.0}) {
        Field u0 = gaussian_bump(g, 0.5, 2.0);
        Field v0 = gaussian_bump(g, 0.5, 2.0);
        for (int i = 0; i < 256; ++i) {
            const double x = g.coord(i);
            v0.values[i] += 0.3 * std::exp(-x * x / 8.0);
        }
        SolutionTrace tu = run_fpme(u0, pure(m), cfg);
        SolutionTrace tv = run_fpme(v0, pure(m), cfg);
        double worst = 0.0;
        for (std::size_t j = 0; j < tu.snapshots.size(); ++j)
            for (int i = 0; i < 256; ++i)
                worst = std::max(worst, tu.snapshots[j].values[i] -
                                            tv.snapshots[j].values[i]);
        CHECK(worst <= 1e-8);
    }
}

TEST_CASE("exact linear scheme reproduces the heat semigroup on modes") {
    const double L = 8.0;
    Grid g(1, 128, L);
    const double s = 0.65;
    Field u0(g);
    const double k1 = M_PI / L, k3 = 3.0 * M_PI / L;
    for (int i = 0; i < 128; ++i) {
        const double x = g.coord(i);
        u0.values[i] = 1.0 + 0.5 * std::cos(k1 * x) - 0.2 * std::cos(k3 * x);
    }
    StepperConfig cfg;
    cfg.scheme = Scheme::exact_linear;
    cfg.dt = 0.1;
    cfg.t_end = 0.5;
    cfg.positivity_floor = 0.0;
    SolutionTrace tr = run_fpme(u0, pure(1.0, s), cfg);
    const Field& u = tr.snapshots.back();
    const double d1 = std::exp(-std::pow(k1, 2.0 * s) * 0.5);
    const double d3 = std::exp(-std::pow(k3, 2.0 * s) * 0.5);
    for (int i = 0; i < 128; ++i) {
        const double x = g.coord(i);
        const double expect =
            1.0 + 0.5 * d1 * std::cos(k1 * x) - 0.2 * d3 * std::cos(k3 * x);
        CHECK(u.values[i] == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("imex converges to exact_linear as dt -> 0 for m = 1") {
    Grid g(1, 128, 8.0);
    Field u0 = gaussian_bump(g, 1.0, 2.0);
    StepperConfig fine;
    fine.scheme = Scheme::exact_linear;
    fine.dt = 1e-2;
    fine.t_end = 0.5;
    SolutionTrace ref = run_fpme(u0, pure(1.0), fine);

    double prev_err = 1e300;
    for (double dt : {4e-3, 1e-3, 2.5e-4}) {
        StepperConfig cfg;
        cfg.dt = dt;
        cfg.t_end = 0.5;
        SolutionTrace tr = run_fpme(u0, pure(1.0), cfg);
        double err = 0.0;
        for (int i = 0; i < 128; ++i)
            err = std::max(err, std::abs(tr.snapshots.back().values[i] -
                                         ref.snapshots.back().values[i]));
        CHECK(err < 0.7 * prev_err);
        prev_err = err;
    }
    CHECK(prev_err < 1e-5);
}

TEST_CASE("time rescaling of the linearizing transform") {
    CHECK(tau_rescale(0.7, 1.0, 2.0) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(tau_rescale(1.0, 2.0, 1.0) ==
          doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
    CHECK(tau_rescale(2.0, 0.5, 1.0) ==
          doctest::Approx(2.0 * (1.0 - std::exp(-1.0))).epsilon(1e-14));
    // Continuity across m = 1.
    CHECK(tau_rescale(2.0, 1.0 + 1e-10, 1.0) ==
          doctest::Approx(2.0).epsilon(1e-8));
    CHECK(tau_rescale(2.0, 1.0 - 1e-10, 1.0) ==
          doctest::Approx(2.0).epsilon(1e-8));
    // m < 1 saturates at 1 / ((1-m) a).
    CHECK(tau_rescale(1e6, 0.5, 1.0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("linearized supersolution envelope") {
    ModelParams p = pure(0.75);
    p.reaction = ReactionSpec::logistic(1.0);
    CHECK_THROWS_AS(linearized_supersolution_bound(5.0, 1.0, p, 1.0, 1.0, 0.0),
                    std::invalid_argument);
    const double b1 = linearized_supersolution_bound(5.0, 1.0, p, 1.0, 1.0, 0.4);
    const double b2 = linearized_supersolution_bound(10.0, 1.0, p, 1.0, 1.0, 0.4);
    CHECK(b1 > 0.0);
    // |x|^{-(N+2s)} tail: doubling x divides by 2^{N+2s} = 4.
    CHECK(b2 == doctest::Approx(b1 / 4.0).epsilon(1e-12));
    // Nondecreasing in t.
    const double b3 = linearized_supersolution_bound(5.0, 2.0, p, 1.0, 1.0, 0.4);
    CHECK(b3 > b1);
}

TEST_CASE("source-type profile extraction on a small run") {
    ModelParams p = pure(2.0);
    Grid g(1, 1024, 256.0);
    StepperConfig cfg;
    cfg.dt = 5e-3;
    cfg.t_end = 5.0;
    RadialProfile prof = barenblatt_profile(1.0, p, g, cfg, 0.05);
    CHECK(prof.meta.at("alpha") == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(prof.meta.at("beta") == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(prof.meta.at("collapse_residual") <= 0.05);
    CHECK(prof.meta.at("F0") > 0.0);
    // Tail decays with the kernel power -(N+2s) = -2.
    TailLaw law =
        tail_fit(prof, -2.0, 3.5, prof.meta.at("eta_clean"));
    CHECK(law.exponent == doctest::Approx(-2.0).epsilon(0.10));

    // Unattainable tolerance reports the achieved residual.
    CHECK_THROWS_AS(barenblatt_profile(1.0, p, g, cfg, 1e-6),
                    std::runtime_error);
}

TEST_CASE("mass scaling identity on a small run") {
    ModelParams p = pure(2.0);
    Grid g(1, 1024, 256.0);
    StepperConfig cfg;
    cfg.dt = 5e-3;
    cfg.t_end = 5.0;
    MassScalingReport rep = verify_mass_scaling(2.0, p, g, cfg);
    CHECK(rep.n_checked > 100);
    CHECK(rep.max_rel_gap <= 0.01);
}
