#include <cmath>
#include <vector>

#include "doctest.h"
#include "frackpp/special.hpp"

using namespace frackpp;

TEST_CASE("half-integer Bessel closed forms") {
    for (double z : {0.3, 1.0, 2.7, 10.0, 41.5}) {
        const double pref = std::sqrt(2.0 / (M_PI * z));
        CHECK(bessel_j(0.5, z) ==
              doctest::Approx(pref * std::sin(z)).epsilon(1e-13));
        CHECK(bessel_j(-0.5, z) ==
              doctest::Approx(pref * std::cos(z)).epsilon(1e-13));
        CHECK(bessel_j(1.5, z) ==
              doctest::Approx(pref * (std::sin(z) / z - std::cos(z)))
                  .epsilon(1e-12));
    }
}

TEST_CASE("three-term recurrence ties orders together") {
    // J_{nu-1}(z) + J_{nu+1}(z) = (2 nu / z) J_nu(z)
    for (double z : {0.7, 3.3, 12.0}) {
        const double lhs_half = bessel_j(-0.5, z) + bessel_j(1.5, z);
        CHECK(lhs_half ==
              doctest::Approx(bessel_j(0.5, z) / z).epsilon(1e-12));
        const double lhs_int = bessel_j(0.0, z) + bessel_j(2.0, z);
        CHECK(lhs_int ==
              doctest::Approx(2.0 / z * bessel_j(1.0, z)).epsilon(1e-12));
    }
}

TEST_CASE("Bessel zeros") {
    CHECK(bessel_j_zero(0.5, 1) == doctest::Approx(M_PI).epsilon(1e-14));
    CHECK(bessel_j_zero(0.5, 7) == doctest::Approx(7.0 * M_PI).epsilon(1e-14));
    CHECK(bessel_j_zero(-0.5, 1) ==
          doctest::Approx(0.5 * M_PI).epsilon(1e-14));
    CHECK(bessel_j_zero(0.0, 1) ==
          doctest::Approx(2.404825557695773).epsilon(1e-12));
    CHECK(bessel_j_zero(1.0, 1) ==
          doctest::Approx(3.831705970207512).epsilon(1e-12));
    for (int k : {1, 2, 5, 20}) {
        CHECK(std::abs(bessel_j(0.0, bessel_j_zero(0.0, k))) < 1e-12);
        CHECK(std::abs(bessel_j(1.0, bessel_j_zero(1.0, k))) < 1e-12);
    }
    // Zeros interlace: j_{0,k} < j_{1,k} < j_{0,k+1}.
    for (int k : {1, 2, 3, 8}) {
        CHECK(bessel_j_zero(0.0, k) < bessel_j_zero(1.0, k));
        CHECK(bessel_j_zero(1.0, k) < bessel_j_zero(0.0, k + 1));
    }
}

TEST_CASE("Gauss-Legendre rules") {
    const GaussLegendre& gl = gauss_legendre(16);
    REQUIRE(gl.nodes.size() == 16);
    double wsum = 0.0;
    for (double w : gl.weights) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));

    // Degree-31 polynomial exactness: x^30 on [-1,1] -> 2/31.
    double p30 = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i)
        p30 += gl.weights[i] * std::pow(gl.nodes[i], 30);
    CHECK(p30 == doctest::Approx(2.0 / 31.0).epsilon(1e-12));

    CHECK(integrate_gl([](double x) { return x * x; }, 0.0, 1.0) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(integrate_gl([](double x) { return std::cos(x); }, 0.0, M_PI / 2) ==
          doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("graded panels resolve algebraic endpoint behavior") {
    CHECK(integrate_graded_left([](double x) { return 1.0 / std::sqrt(x); },
                                0.0, 1.0) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(integrate_graded_left(
              [](double x) { return std::pow(x, -0.75); }, 0.0, 16.0) ==
          doctest::Approx(4.0 * 2.0).epsilon(1e-11));
    // Shifted left endpoint.
    CHECK(integrate_graded_left(
              [](double x) { return 1.0 / std::sqrt(x - 2.0); }, 2.0, 3.0) ==
          doctest::Approx(2.0).epsilon(1e-11));
}

TEST_CASE("epsilon acceleration sums slow alternating series") {
    // sum (-1)^k / (k+1) = log 2, truncated far before raw convergence.
    std::vector<double> partial;
    double acc = 0.0;
    for (int k = 0; k < 14; ++k) {
        acc += (k % 2 == 0 ? 1.0 : -1.0) / (k + 1);
        partial.push_back(acc);
    }
    AccelResult r = wynn_epsilon(partial);
    CHECK(r.value == doctest::Approx(std::log(2.0)).epsilon(1e-9));
    CHECK(std::abs(r.value - std::log(2.0)) <= 10.0 * r.err_estimate + 1e-12);

    // pi from the Leibniz series, 12 terms.
    partial.clear();
    acc = 0.0;
    for (int k = 0; k < 12; ++k) {
        acc += (k % 2 == 0 ? 4.0 : -4.0) / (2 * k + 1);
        partial.push_back(acc);
    }
    CHECK(wynn_epsilon(partial).value == doctest::Approx(M_PI).epsilon(1e-8));
}

TEST_CASE("least-squares line fit") {
    std::vector<double> x{0.0, 1.0, 2.0, 3.0, 4.0};
    std::vector<double> y;
    for (double xi : x) y.push_back(2.0 * xi + 3.0);
    LinFit f = linfit(x, y);
    CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(f.intercept == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(f.max_abs_residual < 1e-13);

    // Perturbation symmetric about the mean abscissa shifts only the
    // intercept (by its mean, 0.2) and leaves the slope unchanged.
    y[1] += 0.5;
    y[3] += 0.5;
    LinFit g = linfit(x, y);
    CHECK(g.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(g.intercept == doctest::Approx(3.2).epsilon(1e-12));
    CHECK(g.max_abs_residual == doctest::Approx(0.3).epsilon(1e-12));
}
