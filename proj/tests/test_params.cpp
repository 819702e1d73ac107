#include <stdexcept>

#include "doctest.h"
#include "frackpp/params.hpp"

using namespace frackpp;

static ModelParams make(double m, double s = 0.5, int dim = 1, double a = 1.0) {
    ModelParams p;
    p.dim = dim;
    p.s = s;
    p.m = m;
    p.reaction = ReactionSpec::logistic(a);
    return p;
}

TEST_CASE("critical thresholds") {
    CHECK(make(1.0).m_crit() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(make(1.0).m_one() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(make(1.0, 0.25).m_crit() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(make(1.0, 0.25).m_one() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(make(1.0, 0.5, 2).m_crit() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(make(1.0, 0.5, 2).m_one() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("exponent bundle at the reference points") {
    // m = 0.4: fast-diffusion regime, rate (1-m) a / 2s.
    CriticalExponents e1 = critical_exponents(make(0.4));
    CHECK(e1.beta == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(e1.alpha == doctest::Approx(2.5).epsilon(1e-14));
    REQUIRE(e1.sigma1.has_value());
    CHECK(*e1.sigma1 == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(!e1.sigma3.has_value());

    // m = 1: linear case, rate a / (N + 2s).
    CriticalExponents e2 = critical_exponents(make(1.0));
    CHECK(e2.beta == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(e2.sigma2 == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(!e2.sigma1.has_value());
    CHECK(!e2.sigma3.has_value());

    // m = 2: slow diffusion, upper rate (1 + 2(m-1) beta s) a / (N + 2s).
    CriticalExponents e3 = critical_exponents(make(2.0));
    CHECK(e3.beta == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(e3.alpha == doctest::Approx(0.5).epsilon(1e-14));
    REQUIRE(e3.sigma3.has_value());
    CHECK(*e3.sigma3 == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(e3.sigma2 == doctest::Approx(0.5).epsilon(1e-14));

    // Scaling relation beta = 1 / (N(m-1) + 2s) across dimension.
    CriticalExponents e4 = critical_exponents(make(1.5, 0.75, 2));
    CHECK(e4.beta == doctest::Approx(1.0 / (2.0 * 0.5 + 1.5)).epsilon(1e-14));
    CHECK(e4.alpha == doctest::Approx(2.0 * e4.beta).epsilon(1e-14));
}

TEST_CASE("sigma2 is continuous across m = 1") {
    const double below = critical_exponents(make(1.0 - 1e-9)).sigma2;
    const double above = critical_exponents(make(1.0 + 1e-9)).sigma2;
    CHECK(below == doctest::Approx(above).epsilon(1e-8));
}

TEST_CASE("regime classification") {
    CHECK(classify_regime(make(0.4)) == Regime::R1);
    CHECK(classify_regime(make(0.75)) == Regime::R2);
    CHECK(classify_regime(make(1.0)) == Regime::R2);
    CHECK(classify_regime(make(2.0)) == Regime::R3);
    CHECK(regime_name(Regime::R1) != regime_name(Regime::R3));

    // Extinction range m <= m_c and the borderline m = m_1 both reject.
    CHECK_THROWS_AS(classify_regime(make(0.4, 0.25)), std::invalid_argument);
    CHECK_THROWS_AS(classify_regime(make(0.5)), std::invalid_argument);
    CHECK_THROWS_AS(classify_regime(make(2.0 / 3.0, 0.25)),
                    std::invalid_argument);
}

TEST_CASE("parameter validation") {
    CHECK_NOTHROW(make(2.0).validate());
    CHECK_NOTHROW(make(1.0, 1.0).validate());

    ModelParams bad_s = make(1.0);
    bad_s.s = 1.5;
    CHECK_THROWS_AS(bad_s.validate(), std::invalid_argument);
    bad_s.s = 0.0;
    CHECK_THROWS_AS(bad_s.validate(), std::invalid_argument);

    ModelParams bad_m = make(0.0);
    CHECK_THROWS_AS(bad_m.validate(), std::invalid_argument);

    ModelParams bad_dim = make(1.0);
    bad_dim.dim = 0;
    CHECK_THROWS_AS(bad_dim.validate(), std::invalid_argument);
}

TEST_CASE("logistic reaction") {
    ReactionSpec f = ReactionSpec::logistic(2.0);
    CHECK(f(0.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(f(1.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(f(0.5) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(f.fprime0 == doctest::Approx(2.0).epsilon(1e-15));
    CHECK_NOTHROW(f.validate());
}

TEST_CASE("custom reaction validation") {
    // u(1-u)(1+u)/2: concave on [0,1]? f'' = -3u < 0 for u > 0, slopes
    // f'(0) = 1/2 > 0, f'(1) = -1 < 0. Valid.
    ReactionSpec ok = ReactionSpec::custom(
        [](double u) { return 0.5 * u * (1.0 - u) * (1.0 + u); });
    CHECK_NOTHROW(ok.validate());
    CHECK(ok.fprime0 == doctest::Approx(0.5).epsilon(1e-4));

    // u(1-u)^2 has f'(1) = 0: rejected (no strict slope at the stable root).
    ReactionSpec flat = ReactionSpec::custom(
        [](double u) { return u * (1.0 - u) * (1.0 - u); });
    CHECK_THROWS_AS(flat.validate(), std::invalid_argument);

    // u(1-u)(2u-0.5) is not concave and f'(0) < 0.
    ReactionSpec conv = ReactionSpec::custom(
        [](double u) { return u * (1.0 - u) * (2.0 * u - 0.5); });
    CHECK_THROWS_AS(conv.validate(), std::invalid_argument);
}
