#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "frackpp/simd_kernels.hpp"

using namespace frackpp;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed,
                               double lo = 0.0, double hi = 1.0) {
    std::mt19937_64 eng(seed);
    std::vector<double> v(n);
    for (double& x : v)
        x = lo + (hi - lo) * ((eng() >> 11) * 0x1.0p-53);
    return v;
}

// Sizes straddling the vector width and remainder handling.
const std::size_t sizes[] = {1, 2, 3, 4, 5, 7, 8, 15, 16, 17, 64, 1023, 4096};

void compare_impl(const PointwiseKernels& a, const PointwiseKernels& b) {
    for (std::size_t n : sizes) {
        std::vector<double> x = random_vec(n, 11 * n + 1, -2.0, 3.0);
        std::vector<double> y = random_vec(n, 11 * n + 2, -1.0, 1.0);
        std::vector<double> pos = random_vec(n, 11 * n + 3, 1e-8, 2.0);

        CHECK(a.sum(x.data(), n) ==
              doctest::Approx(b.sum(x.data(), n)).epsilon(1e-13));
        CHECK(a.minval(x.data(), n) == b.minval(x.data(), n));
        CHECK(a.maxval(x.data(), n) == b.maxval(x.data(), n));

        {
            std::vector<double> ya = y, yb = y;
            a.axpby(1.7, x.data(), -0.3, ya.data(), n);
            b.axpby(1.7, x.data(), -0.3, yb.data(), n);
            for (std::size_t i = 0; i < n; ++i)
                CHECK(ya[i] == doctest::Approx(yb[i]).epsilon(1e-15));
        }
        {
            std::vector<double> xa = x, xb = x;
            a.scale(xa.data(), 0.37, n);
            b.scale(xb.data(), 0.37, n);
            for (std::size_t i = 0; i < n; ++i) CHECK(xa[i] == xb[i]);
        }
        for (double m : {1.0, 1.5, 2.0, 3.0, 0.5, 0.37, 2.6}) {
            std::vector<double> oa(n), ob(n);
            a.pow_m(pos.data(), m, oa.data(), n);
            b.pow_m(pos.data(), m, ob.data(), n);
            for (std::size_t i = 0; i < n; ++i)
                CHECK(oa[i] == doctest::Approx(ob[i]).epsilon(2e-15));
        }
        {
            std::vector<double> xa = x, xb = x;
            const double ca = a.clip_floor(xa.data(), 0.25, n);
            const double cb = b.clip_floor(xb.data(), 0.25, n);
            CHECK(ca == doctest::Approx(cb).epsilon(1e-13));
            for (std::size_t i = 0; i < n; ++i) CHECK(xa[i] == xb[i]);
        }
        {
            std::vector<double> xa = x, xb = x;
            const double ca = a.clip_ceil(xa.data(), 0.75, n);
            const double cb = b.clip_ceil(xb.data(), 0.75, n);
            CHECK(ca == doctest::Approx(cb).epsilon(1e-13));
            for (std::size_t i = 0; i < n; ++i) CHECK(xa[i] == xb[i]);
        }
        {
            std::vector<double> ua = random_vec(n, 11 * n + 4);
            std::vector<double> ub = ua;
            const double E = std::exp(0.35);
            a.logistic_map(ua.data(), E, n);
            b.logistic_map(ub.data(), E, n);
            for (std::size_t i = 0; i < n; ++i)
                CHECK(ua[i] == doctest::Approx(ub[i]).epsilon(2e-15));
        }
        {
            std::vector<double> g1 = random_vec(n, 11 * n + 5);
            std::vector<double> g2 = random_vec(n, 11 * n + 6);
            std::vector<double> oa(n), ob(n);
            a.fused_update(g1.data(), x.data(), g2.data(), y.data(),
                           oa.data(), n);
            b.fused_update(g1.data(), x.data(), g2.data(), y.data(),
                           ob.data(), n);
            for (std::size_t i = 0; i < n; ++i)
                CHECK(oa[i] == doctest::Approx(ob[i]).epsilon(1e-15));
            a.hadamard(g1.data(), x.data(), oa.data(), n);
            b.hadamard(g1.data(), x.data(), ob.data(), n);
            for (std::size_t i = 0; i < n; ++i) CHECK(oa[i] == ob[i]);
        }
    }
}

}  // namespace

TEST_CASE("scalar reference kernels are self-consistent") {
    const PointwiseKernels& k = kernels_scalar();
    const std::size_t n = 257;
    std::vector<double> x = random_vec(n, 42, -1.0, 2.0);

    double s = 0.0, mn = x[0], mx = x[0];
    for (double v : x) {
        s += v;
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    }
    CHECK(k.sum(x.data(), n) == doctest::Approx(s).epsilon(1e-13));
    CHECK(k.minval(x.data(), n) == mn);
    CHECK(k.maxval(x.data(), n) == mx);

    std::vector<double> u = random_vec(n, 43);
    std::vector<double> u2 = u;
    const double E = std::exp(0.5);
    k.logistic_map(u.data(), E, n);
    for (std::size_t i = 0; i < n; ++i) {
        const double expect = u2[i] * E / (1.0 + u2[i] * (E - 1.0));
        CHECK(u[i] == doctest::Approx(expect).epsilon(1e-15));
        CHECK(u[i] >= 0.0);
        CHECK(u[i] <= 1.0);
    }

    std::vector<double> out(n);
    k.pow_m(u2.data(), 1.5, out.data(), n);
    for (std::size_t i = 0; i < n; ++i)
        CHECK(out[i] == doctest::Approx(std::pow(u2[i], 1.5)).epsilon(2e-15));
}

TEST_CASE("clip kernels report the exact mass moved") {
    const PointwiseKernels& k = kernels_scalar();
    std::vector<double> x{-1.0, 0.1, 0.5, 2.0, 0.25};
    std::vector<double> y = x;
    const double added = k.clip_floor(y.data(), 0.25, y.size());
    CHECK(added == doctest::Approx(1.25 + 0.15).epsilon(1e-15));
    CHECK(y[0] == 0.25);
    CHECK(y[3] == 2.0);

    y = x;
    const double removed = k.clip_ceil(y.data(), 0.5, y.size());
    CHECK(removed == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(y[3] == 0.5);
    CHECK(y[0] == -1.0);
}

TEST_CASE("runtime-selected kernels match the scalar reference") {
    compare_impl(kernels_scalar(), kernels());
}

TEST_CASE("avx2 kernels match the scalar reference" *
          doctest::skip(kernels_avx2() == nullptr)) {
    REQUIRE(kernels_avx2() != nullptr);
    compare_impl(kernels_scalar(), *kernels_avx2());
}
