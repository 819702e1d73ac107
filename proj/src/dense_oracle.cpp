#include "frackpp/dense_oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace frackpp {

double singular_integral_constant(int N, double s) {
    if (N < 1) throw std::invalid_argument("singular_integral_constant: N >= 1 required");
    if (!(s > 0.0 && s < 1.0))
        throw std::invalid_argument("singular_integral_constant: s in (0,1) required");
    return std::pow(2.0, 2.0 * s) * s * std::tgamma(s + 0.5 * N) /
           (std::pow(M_PI, 0.5 * N) * std::tgamma(1.0 - s));
}

Field oracle_fractional_laplacian_dense(const Field& u, double s) {
    const Grid& g = u.grid;
    if (g.total_points() > 256)
        throw std::invalid_argument(
            "oracle_fractional_laplacian_dense: grid exceeds the 256-point cap");
    if (!(s > 0.0 && s < 1.0))
        throw std::invalid_argument("oracle_fractional_laplacian_dense: s in (0,1) required");

    const int n = g.points_per_axis;
    const double h = g.spacing();
    const double L = g.half_length;
    const double C = singular_integral_constant(g.dim, s);
    constexpr int shells = 5;

    Field out(g);
    out.time = u.time;

    if (g.dim == 1) {
        const double p = 1.0 + 2.0 * s;
        const double self_w = std::pow(0.5 * h, 2.0 - 2.0 * s) / (2.0 - 2.0 * s);
        for (int i = 0; i < n; ++i) {
            const double xi = g.coord(i);
            double acc = 0.0;
            for (int j = 0; j < n; ++j) {
                const double du = u.values[static_cast<std::size_t>(i)] -
                                  u.values[static_cast<std::size_t>(j)];
                if (du == 0.0) continue;
                const double yj = g.coord(j);
                double ker = 0.0;
                for (int k = -shells; k <= shells; ++k)
                    ker += std::pow(std::abs(xi - yj - 2.0 * L * k), -p);
                acc += du * ker;
            }
            acc *= h;
            const double upp = (u.values[static_cast<std::size_t>((i + 1) % n)] -
                                2.0 * u.values[static_cast<std::size_t>(i)] +
                                u.values[static_cast<std::size_t>((i + n - 1) % n)]) /
                               (h * h);
            acc -= upp * self_w;
            out.values[static_cast<std::size_t>(i)] = C * acc;
        }
    } else {
        const double p = 2.0 + 2.0 * s;
        const double r_eq = h / std::sqrt(M_PI);
        const double self_w =
            0.5 * M_PI * std::pow(r_eq, 2.0 - 2.0 * s) / (2.0 - 2.0 * s);
        for (int iy = 0; iy < n; ++iy) {
            for (int ix = 0; ix < n; ++ix) {
                const double x0 = g.coord(ix);
                const double y0 = g.coord(iy);
                const double ui = u.at2d(ix, iy);
                double acc = 0.0;
                for (int jy = 0; jy < n; ++jy) {
                    for (int jx = 0; jx < n; ++jx) {
                        const double du = ui - u.at2d(jx, jy);
                        if (du == 0.0) continue;
                        const double dx0 = x0 - g.coord(jx);
                        const double dy0 = y0 - g.coord(jy);
                        double ker = 0.0;
                        for (int ky = -shells; ky <= shells; ++ky) {
                            const double dy = dy0 - 2.0 * L * ky;
                            for (int kx = -shells; kx <= shells; ++kx) {
                                const double dx = dx0 - 2.0 * L * kx;
                                ker += std::pow(dx * dx + dy * dy, -0.5 * p);
                            }
                        }
                        acc += du * ker;
                    }
                }
                acc *= h * h;
                const double lap =
                    (u.at2d((ix + 1) % n, iy) + u.at2d((ix + n - 1) % n, iy) +
                     u.at2d(ix, (iy + 1) % n) + u.at2d(ix, (iy + n - 1) % n) -
                     4.0 * ui) /
                    (h * h);
                acc -= lap * self_w;
                out.at2d(ix, iy) = C * acc;
            }
        }
    }
    return out;
}

}  // namespace frackpp
