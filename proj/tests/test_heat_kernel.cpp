#include <cmath>
#include <vector>

#include "doctest.h"
#include "frackpp/heat_kernel.hpp"
#include "frackpp/radial_profile.hpp"

using namespace frackpp;

TEST_CASE("tail constant closed form") {
    // C1(N,s) = s 2^{2s} pi^{-(1+N/2)} sin(pi s) Gamma(s) Gamma(s + N/2).
    const auto c1 = [](int N, double s) {
        return s * std::pow(2.0, 2.0 * s) *
               std::pow(M_PI, -(1.0 + 0.5 * N)) * std::sin(M_PI * s) *
               std::tgamma(s) * std::tgamma(s + 0.5 * N);
    };
    CHECK(asymptotic_constant(1, 0.5) ==
          doctest::Approx(1.0 / M_PI).epsilon(1e-14));
    for (int N : {1, 2})
        for (double s : {0.25, 0.5, 0.75, 0.9})
            CHECK(asymptotic_constant(N, s) ==
                  doctest::Approx(c1(N, s)).epsilon(1e-13));
    CHECK_THROWS(asymptotic_constant(3, 0.5));
}

TEST_CASE("s = 1/2 kernels are the Poisson kernels") {
    // N=1: f(r) = (1/pi) / (1 + r^2); N=2: f(r) = (1/2pi) (1 + r^2)^{-3/2}.
    for (int i = 0; i <= 80; ++i) {
        const double r = 0.25 * i;
        CHECK(kernel_value(0.5, 1, r) ==
              doctest::Approx((1.0 / M_PI) / (1.0 + r * r)).epsilon(1e-6));
    }
    for (double r : {0.0, 0.5, 1.0, 3.0, 10.0, 50.0}) {
        CHECK(kernel_value(0.5, 2, r) ==
              doctest::Approx(std::pow(1.0 + r * r, -1.5) / (2.0 * M_PI))
                  .epsilon(1e-6));
    }
}

TEST_CASE("s = 1 kernel is the Gaussian") {
    for (double r : {0.0, 0.5, 1.0, 2.0, 4.0}) {
        CHECK(kernel_value(1.0, 1, r) ==
              doctest::Approx(std::exp(-r * r / 4.0) /
                              std::sqrt(4.0 * M_PI))
                  .epsilon(1e-8));
    }
}

TEST_CASE("space-time scaling") {
    // K(x,t) = t^{-N/2s} f(t^{-1/2s} |x|); for s=1/2, N=1 this is the
    // Cauchy kernel t / (pi (t^2 + x^2)).
    for (double t : {0.25, 1.0, 4.0})
        for (double x : {0.0, 0.7, 3.0}) {
            CHECK(kernel_value_xt(0.5, 1, x, t) ==
                  doctest::Approx(t / (M_PI * (t * t + x * x)))
                      .epsilon(1e-6));
        }
    // Self-similarity for a non-closed-form s.
    const double s = 0.75, t = 2.0, x = 1.3;
    CHECK(kernel_value_xt(s, 1, x, t) ==
          doctest::Approx(std::pow(t, -1.0 / (2.0 * s)) *
                          kernel_value(s, 1, x * std::pow(t, -1.0 / (2.0 * s))))
              .epsilon(1e-12));
}

TEST_CASE("kernel mass is one") {
    CHECK(kernel_mass(0.5, 1) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(kernel_mass(0.75, 1) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(kernel_mass(0.35, 1) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(kernel_mass(0.5, 2) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("tail law emerges from sampled profiles") {
    for (double s : {0.25, 0.75}) {
        RadialProfile prof = kernel_profile(s, 1, log_spaced(0.05, 400.0, 100));
        TailLaw law = tail_fit(prof, -(1.0 + 2.0 * s), 40.0, 400.0, 2.0 * s);
        CHECK(law.exponent ==
              doctest::Approx(-(1.0 + 2.0 * s)).epsilon(0.05));
        CHECK(law.constant_extrapolated ==
              doctest::Approx(asymptotic_constant(1, s)).epsilon(0.05));
    }
}

TEST_CASE("positivity and monotone decay of the profile") {
    for (double s : {0.3, 0.5, 0.9}) {
        std::vector<double> radii = log_spaced(0.01, 100.0, 80);
        radii.insert(radii.begin(), 0.0);
        RadialProfile prof = kernel_profile(s, 1, radii);
        for (std::size_t i = 0; i < prof.values.size(); ++i) {
            CHECK(prof.values[i] > 0.0);
            if (i > 0) CHECK(prof.values[i] <= prof.values[i - 1] * (1 + 1e-9));
        }
    }
}

TEST_CASE("time derivative changes sign along the tail") {
    DerivativeTail rep = derivative_tail_check(0.5, 1, log_spaced(5.0, 120.0, 25));
    // N f + r f' for the Cauchy kernel is (1 - r^2) f / (1 + r^2) < 0 for
    // r > 1, so K(x,t) increases in t at fixed large |x|.
    CHECK(rep.bracket_negative_tail);
    CHECK(rep.kernel_time_increasing_tail);
    CHECK(rep.law.exponent == doctest::Approx(-2.0).epsilon(0.05));
    // Far field: N f + r f' -> -2s C1 r^{-(N+2s)}.
    CHECK(rep.law.constant_extrapolated ==
          doctest::Approx(1.0 / M_PI).epsilon(0.10));

    DerivativeTail rep75 =
        derivative_tail_check(0.75, 1, log_spaced(5.0, 120.0, 25));
    CHECK(rep75.bracket_negative_tail);
    CHECK(rep75.kernel_time_increasing_tail);
    CHECK(rep75.law.constant_extrapolated ==
          doctest::Approx(1.5 * asymptotic_constant(1, 0.75)).epsilon(0.10));
}

TEST_CASE("2d profile tail") {
    RadialProfile prof = kernel_profile(0.5, 2, log_spaced(0.05, 200.0, 80));
    TailLaw law = tail_fit(prof, -3.0, 20.0, 200.0, 1.0);
    CHECK(law.exponent == doctest::Approx(-3.0).epsilon(0.05));
    CHECK(law.constant_extrapolated ==
          doctest::Approx(asymptotic_constant(2, 0.5)).epsilon(0.05));
}
