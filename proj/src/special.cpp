#include "frackpp/special.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace frackpp {

double bessel_j(double order, double z) {
  if (z < 0.0) throw std::invalid_argument("bessel_j needs z >= 0");
  if (order == -0.5) {
    if (z == 0.0) throw std::invalid_argument("J_{-1/2} is singular at 0");
    return std::sqrt(2.0 / (M_PI * z)) * std::cos(z);
  }
  if (order == 0.5) {
    if (z == 0.0) return 0.0;
    return std::sqrt(2.0 / (M_PI * z)) * std::sin(z);
  }
  if (order == 1.5) {
    if (z == 0.0) return 0.0;
    if (z < 1e-4) {
      // Series start, avoids cancellation of sin z / z - cos z.
      return std::sqrt(2.0 * z / M_PI) * (z / 3.0) * (1.0 - z * z / 10.0);
    }
    return std::sqrt(2.0 / (M_PI * z)) * (std::sin(z) / z - std::cos(z));
  }
  if (order == 2.5) {
    if (z == 0.0) return 0.0;
    if (z < 1e-3) {
      double x2 = z * z;
      return std::sqrt(2.0 / M_PI) * std::pow(z, 2.5) / 15.0 *
             (1.0 - x2 / 14.0);
    }
    return std::sqrt(2.0 / (M_PI * z)) *
           ((3.0 / (z * z) - 1.0) * std::sin(z) - 3.0 * std::cos(z) / z);
  }
  if (order == std::floor(order)) {
    if (order >= 0.0) return std::cyl_bessel_j(order, z);
    // J_{-n}(z) = (-1)^n J_n(z)
    const double n = -order;
    const double sign = std::fmod(n, 2.0) == 0.0 ? 1.0 : -1.0;
    return sign * std::cyl_bessel_j(n, z);
  }
  throw std::invalid_argument("bessel_j: unsupported order");
}

namespace {

// J_nu'(z) = J_{nu-1}(z) - (nu/z) J_nu(z)
double bessel_j_prime(double order, double z) {
  return bessel_j(order - 1.0, z) - (order / z) * bessel_j(order, z);
}

double mcmahon_zero(double nu, int k) {
  double b = (k + 0.5 * nu - 0.25) * M_PI;
  double mu = 4.0 * nu * nu;
  double b8 = 8.0 * b;
  double z = b - (mu - 1.0) / b8 -
             4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8 * b8 * b8);
  for (int it = 0; it < 3; ++it) {
    double f = bessel_j(nu, z);
    double fp = bessel_j_prime(nu, z);
    z -= f / fp;
  }
  return z;
}

}  // namespace

double bessel_j_zero(double order, int k) {
  if (k < 1) throw std::invalid_argument("bessel_j_zero needs k >= 1");
  if (order == -0.5) return (k - 0.5) * M_PI;
  if (order == 0.5) return k * M_PI;
  if (order == 0.0 || order == 1.0) return mcmahon_zero(order, k);
  throw std::invalid_argument("bessel_j_zero: unsupported order");
}

const GaussLegendre& gauss_legendre(int n) {
  static std::map<int, GaussLegendre> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  if (n < 2 || n > 256)
    throw std::invalid_argument("gauss_legendre order out of range");
  GaussLegendre gl;
  gl.nodes.resize(n);
  gl.weights.resize(n);
  // Newton iteration on Legendre polynomials, symmetric pairs.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    gl.nodes[i] = -x;
    gl.nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    gl.weights[i] = w;
    gl.weights[n - 1 - i] = w;
  }
  return cache.emplace(n, std::move(gl)).first->second;
}

double integrate_gl(const std::function<double(double)>& f, double a,
                    double b, int order) {
  const GaussLegendre& gl = gauss_legendre(order);
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < order; ++i)
    acc += gl.weights[i] * f(mid + half * gl.nodes[i]);
  return acc * half;
}

double integrate_graded_left(const std::function<double(double)>& f,
                             double a, double b, int order, int levels) {
  if (!(b > a)) throw std::invalid_argument("integrate_graded_left: need b > a");
  const double len = b - a;
  double acc = 0.0;
  double hi = 1.0;
  for (int j = 0; j < levels; ++j) {
    const double lo = 0.5 * hi;
    acc += integrate_gl(f, a + lo * len, a + hi * len, order);
    hi = lo;
  }
  acc += integrate_gl(f, a, a + hi * len, order);
  return acc;
}

AccelResult wynn_epsilon(const std::vector<double>& s) {
  const int n = int(s.size());
  if (n == 0) throw std::invalid_argument("wynn_epsilon: empty sequence");
  if (n == 1) return {s[0], HUGE_VAL};
  double scale = 0.0;
  for (double v : s) scale = std::max(scale, std::fabs(v));
  scale = std::max(scale, 1e-300);
  // Any credible limit lies within the span of the partial sums; even-column
  // entries far outside it are artifacts of near-zero denominators.
  const double sane = 4.0 * scale;
  std::vector<double> prev_odd(n, 0.0);  // epsilon_{-1}
  std::vector<double> cur = s;           // epsilon_0
  AccelResult best{cur.back(), std::fabs(cur[n - 1] - cur[n - 2])};
  std::vector<double> next;
  for (int col = 1; int(cur.size()) > 1; ++col) {
    const bool odd_col = (col % 2 == 1);
    next.assign(cur.size() - 1, 0.0);
    std::size_t valid = 0;
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      double diff = cur[i + 1] - cur[i];
      if (odd_col && std::fabs(diff) < 1e-300) {
        // Even column collapsed: the shared value is (numerically) the limit.
        return {cur[i], 0.0};
      }
      const double v = prev_odd[i + 1] + 1.0 / diff;
      if (!std::isfinite(v) || (!odd_col && std::fabs(v) > sane)) break;
      next[i] = v;
      valid = i + 1;
    }
    if (valid < 2) break;
    next.resize(valid);
    prev_odd = std::move(cur);
    prev_odd.resize(valid + 1);
    cur = std::move(next);
    next.clear();
    if (!odd_col && cur.size() >= 2) {
      double est = std::fabs(cur[cur.size() - 1] - cur[cur.size() - 2]);
      if (est <= best.err_estimate) best = {cur.back(), est};
    }
  }
  return best;
}

LinFit linfit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("linfit needs >= 2 matching points");
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double det = n * sxx - sx * sx;
  if (std::fabs(det) < 1e-300) throw std::invalid_argument("linfit: degenerate x");
  LinFit f;
  f.slope = (n * sxy - sx * sy) / det;
  f.intercept = (sy - f.slope * sx) / n;
  for (std::size_t i = 0; i < x.size(); ++i)
    f.max_abs_residual = std::max(
        f.max_abs_residual, std::fabs(y[i] - f.slope * x[i] - f.intercept));
  return f;
}

}  // namespace frackpp
