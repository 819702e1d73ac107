#include "frackpp/heat_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "frackpp/special.hpp"

namespace frackpp {

namespace {

void check_domain(double s, int N) {
    if (!(s > 0.0 && s < 1.0))
        throw std::invalid_argument("kernel: s in (0,1) required");
    if (N < 1 || N > 4)
        throw std::invalid_argument("kernel: N in {1,...,4} supported");
}

double surface_area(int N) {
    // omega_{N-1} = 2 pi^{N/2} / Gamma(N/2)
    return 2.0 * std::pow(M_PI, 0.5 * N) / std::tgamma(0.5 * N);
}

double kernel_at_zero(double s, int N) {
    return std::pow(2.0 * M_PI, -N) * surface_area(N) *
           std::tgamma(N / (2.0 * s)) / (2.0 * s);
}

// f(r) = (2 pi)^{-N/2} r^{-nu} int_0^inf e^{-k^{2s}} k^{N/2} J_nu(k r) dk,
// nu = (N-2)/2. Stable for r <= 1: the integrand decays like e^{-k^{2s}}
// and oscillates with period >= 2 pi / r.
double kernel_direct(double s, int N, double r) {
    const double nu = 0.5 * (N - 2);
    const double k_max = std::pow(46.0, 1.0 / (2.0 * s));
    auto g = [&](double k) {
        return std::exp(-std::pow(k, 2.0 * s)) * std::pow(k, 0.5 * N) *
               bessel_j(nu, k * r);
    };
    const double a1 = std::min(1.0, k_max);
    double total = integrate_graded_left(g, 0.0, a1);
    double a = a1;
    double len = a1;
    const double cap = r > 1e-12 ? 0.5 * M_PI / r : HUGE_VAL;
    while (a < k_max) {
        const double b = std::min(a + std::min(len, cap), k_max);
        total += integrate_gl(g, a, b, 16);
        a = b;
        len *= 1.25;
    }
    return std::pow(2.0 * M_PI, -0.5 * N) * std::pow(r, -nu) * total;
}

// f(r) = (2 pi)^{-N/2} r^{-N} int_0^inf e^{-(w/r)^{2s}} w^{N/2} J_nu(w) dw,
// integrated between consecutive Bessel zeros; the alternating lobe series
// is summed by epsilon acceleration when it has not decayed raw.
double kernel_lobes(double s, int N, double r) {
    const double nu = 0.5 * (N - 2);
    auto g = [&](double w) {
        return std::exp(-std::pow(w / r, 2.0 * s)) * std::pow(w, 0.5 * N) *
               bessel_j(nu, w);
    };
    constexpr int max_lobes = 480;
    std::vector<double> partial;
    partial.reserve(max_lobes);
    double z_prev = bessel_j_zero(nu, 1);
    double sum = integrate_graded_left(g, 0.0, z_prev);
    partial.push_back(sum);
    double peak = std::abs(sum);
    int quiet = 0;
    bool raw_converged = false;
    for (int j = 2; j <= max_lobes; ++j) {
        const double z = bessel_j_zero(nu, j);
        const double lobe = integrate_gl(g, z_prev, z, 16);
        sum += lobe;
        partial.push_back(sum);
        z_prev = z;
        peak = std::max(peak, std::abs(lobe));
        if (std::abs(lobe) < 1e-18 * peak) {
            if (++quiet >= 3) {
                raw_converged = true;
                break;
            }
        } else {
            quiet = 0;
        }
    }
    const double prefactor = std::pow(2.0 * M_PI, -0.5 * N) * std::pow(r, -N);
    if (raw_converged) return prefactor * sum;

    AccelResult best{0.0, HUGE_VAL};
    for (int window : {40, 80, 160, 320}) {
        if (static_cast<int>(partial.size()) < window) break;
        std::vector<double> tail(partial.end() - window, partial.end());
        const AccelResult acc = wynn_epsilon(tail);
        if (acc.err_estimate < best.err_estimate) best = acc;
    }
    if (!(best.err_estimate < 1e-10 * std::max(1.0, peak)))
        throw std::runtime_error(
            "kernel_value: oscillatory quadrature did not converge at r = " +
            std::to_string(r) + " (error estimate " +
            std::to_string(best.err_estimate) + ")");
    return prefactor * best.value;
}

struct QuadFit {
    double c0 = 0.0, c1 = 0.0, c2 = 0.0;
};

// Least squares for y = c0 + c1 x + c2 x^2 via normal equations.
QuadFit quadfit(const std::vector<double>& x, const std::vector<double>& y) {
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, t0 = 0, t1 = 0, t2 = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = x[i], xi2 = xi * xi;
        s0 += 1.0;
        s1 += xi;
        s2 += xi2;
        s3 += xi2 * xi;
        s4 += xi2 * xi2;
        t0 += y[i];
        t1 += y[i] * xi;
        t2 += y[i] * xi2;
    }
    const double det = s0 * (s2 * s4 - s3 * s3) - s1 * (s1 * s4 - s2 * s3) +
                       s2 * (s1 * s3 - s2 * s2);
    if (det == 0.0) throw std::runtime_error("quadfit: singular system");
    QuadFit q;
    q.c0 = (t0 * (s2 * s4 - s3 * s3) - s1 * (t1 * s4 - t2 * s3) +
            s2 * (t1 * s3 - t2 * s2)) /
           det;
    q.c1 = (s0 * (t1 * s4 - t2 * s3) - t0 * (s1 * s4 - s2 * s3) +
            s2 * (s1 * t2 - s2 * t1)) /
           det;
    q.c2 = (s0 * (s2 * t2 - s3 * t1) - s1 * (s1 * t2 - s2 * t1) +
            t0 * (s1 * s3 - s2 * s2)) /
           det;
    return q;
}

}  // namespace

double asymptotic_constant(int N, double s) {
    check_domain(s, N);
    return s * std::pow(2.0, 2.0 * s) * std::pow(M_PI, -(1.0 + 0.5 * N)) *
           std::sin(M_PI * s) * std::tgamma(s) * std::tgamma(s + 0.5 * N);
}

double kernel_value(double s, int N, double r) {
    check_domain(s, N);
    if (!(r >= 0.0) || !std::isfinite(r))
        throw std::invalid_argument("kernel_value: r must be finite and nonnegative");
    if (r == 0.0) return kernel_at_zero(s, N);
    if (r <= 1.0) return kernel_direct(s, N, r);
    return kernel_lobes(s, N, r);
}

double kernel_value_xt(double s, int N, double x_norm, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("kernel_value_xt: t > 0 required");
    const double scale = std::pow(t, -1.0 / (2.0 * s));
    return std::pow(t, -N / (2.0 * s)) * kernel_value(s, N, x_norm * scale);
}

RadialProfile kernel_profile(double s, int N, const std::vector<double>& radii) {
    check_domain(s, N);
    RadialProfile p;
    p.dim = N;
    p.meta["s"] = s;
    p.radii = radii;
    p.values.reserve(radii.size());
    for (double r : radii) p.values.push_back(kernel_value(s, N, r));
    p.validate();
    return p;
}

double kernel_mass(double s, int N) {
    check_domain(s, N);
    const double R = 200.0;
    auto integrand = [&](double r) {
        return kernel_value(s, N, r) * std::pow(r, N - 1);
    };
    double inner = integrate_gl(integrand, 0.0, 1.0, 32);
    double a = 1.0;
    while (a < R) {
        const double b = std::min(a * 1.5, R);
        inner += integrate_gl(integrand, a, b, 24);
        a = b;
    }
    // Tail completion: with x = r^{-2s} and P(x) = f r^{N+2s} (analytic in x
    // near 0), int_R^inf f r^{N-1} dr = (1/2s) int_0^{x_R} P(x) dx. P is fitted
    // as a quadratic in a centered, scaled variable to keep the normal
    // equations conditioned on the narrow x range.
    const std::vector<double> rs = log_spaced(R, 20.0 * R, 24);
    std::vector<double> xs, ys;
    for (double r : rs) {
        xs.push_back(std::pow(r, -2.0 * s));
        ys.push_back(kernel_value(s, N, r) * std::pow(r, N + 2.0 * s));
    }
    const double x_min = xs.back(), x_max = xs.front();
    const double mid = 0.5 * (x_max + x_min), half = 0.5 * (x_max - x_min);
    std::vector<double> us;
    us.reserve(xs.size());
    for (double x : xs) us.push_back((x - mid) / half);
    const QuadFit q = quadfit(us, ys);
    auto antideriv = [&](double u) {
        return q.c0 * u + 0.5 * q.c1 * u * u + q.c2 * u * u * u / 3.0;
    };
    const double u_zero = -mid / half;
    const double tail = (half / (2.0 * s)) * (antideriv(1.0) - antideriv(u_zero));
    return surface_area(N) * (inner + tail);
}

DerivativeTail derivative_tail_check(double s, int N,
                                     const std::vector<double>& radii,
                                     double rel_step) {
    check_domain(s, N);
    if (!(rel_step > 1e-7 && rel_step < 0.05))
        throw std::invalid_argument(
            "derivative_tail_check: differencing step outside sane range");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (radii[i] < 1.0)
            throw std::invalid_argument("derivative_tail_check: radii must be >= 1");
        if (i > 0 && radii[i] / radii[i - 1] < 1.0 + 2.5 * rel_step)
            throw std::invalid_argument(
                "derivative_tail_check: differencing step too coarse relative to "
                "profile resolution");
    }
    DerivativeTail out;
    out.bracket.dim = N;
    out.bracket.meta["s"] = s;
    out.bracket.radii = radii;
    bool all_negative = true;
    for (double r : radii) {
        const double d = rel_step * r;
        const double fp = kernel_value(s, N, r + d);
        const double fm = kernel_value(s, N, r - d);
        const double f0 = kernel_value(s, N, r);
        const double bracket = N * f0 + r * (fp - fm) / (2.0 * d);
        out.bracket.values.push_back(bracket);
        if (bracket >= 0.0) all_negative = false;
    }
    out.bracket_negative_tail = all_negative;
    out.kernel_time_increasing_tail = all_negative;
    out.law = tail_fit(out.bracket, -(N + 2.0 * s));
    return out;
}

}  // namespace frackpp
