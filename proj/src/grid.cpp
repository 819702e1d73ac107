#include "frackpp/grid.hpp"

#include <cmath>
#include <stdexcept>

#include "frackpp/simd_kernels.hpp"

namespace frackpp {

namespace {
bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

Grid::Grid(int dim_, int n_, double half_length_)
    : dim(dim_), points_per_axis(n_), half_length(half_length_) {
  if (dim != 1 && dim != 2)
    throw std::invalid_argument("grid dimension must be 1 or 2");
  if (!power_of_two(points_per_axis) || points_per_axis < 16)
    throw std::invalid_argument(
        "points per axis must be a power of two, at least 16");
  if (!(half_length > 0.0) || !std::isfinite(half_length))
    throw std::invalid_argument("grid half length must be positive");
}

std::size_t Grid::total_points() const {
  std::size_t n = points_per_axis;
  return dim == 1 ? n : n * n;
}

double Grid::freq(int k) const {
  int n = points_per_axis;
  int kw = k <= n / 2 ? k : k - n;
  return M_PI * kw / half_length;
}

double Grid::cell_volume() const {
  double h = spacing();
  return dim == 1 ? h : h * h;
}

double field_mass(const Field& f) {
  return kernels().sum(f.values.data(), f.values.size()) *
         f.grid.cell_volume();
}

double field_min(const Field& f) {
  return kernels().minval(f.values.data(), f.values.size());
}

double field_max(const Field& f) {
  return kernels().maxval(f.values.data(), f.values.size());
}

double interpolate(const Field& f, double x, double y) {
  const Grid& g = f.grid;
  const int n = g.points_per_axis;
  const double h = g.spacing();
  auto wrap = [n](int i) { return ((i % n) + n) % n; };
  double fx = (x + g.half_length) / h;
  int ix = int(std::floor(fx));
  double tx = fx - ix;
  if (g.dim == 1) {
    double a = f.values[wrap(ix)], b = f.values[wrap(ix + 1)];
    return a + tx * (b - a);
  }
  double fy = (y + g.half_length) / h;
  int iy = int(std::floor(fy));
  double ty = fy - iy;
  int i0 = wrap(ix), i1 = wrap(ix + 1), j0 = wrap(iy), j1 = wrap(iy + 1);
  double v00 = f.at2d(i0, j0), v10 = f.at2d(i1, j0);
  double v01 = f.at2d(i0, j1), v11 = f.at2d(i1, j1);
  return (1 - tx) * (1 - ty) * v00 + tx * (1 - ty) * v10 +
         (1 - tx) * ty * v01 + tx * ty * v11;
}

std::vector<double> radial_grid(const Grid& g) {
  std::vector<double> r(g.points_per_axis / 2);
  for (std::size_t j = 0; j < r.size(); ++j) r[j] = j * g.spacing();
  return r;
}

std::vector<double> radial_average(const Field& f,
                                   const std::vector<double>& radii,
                                   int n_rays) {
  const Grid& g = f.grid;
  std::vector<double> out(radii.size());
  if (g.dim == 1) {
    const int c = g.points_per_axis / 2;
    const double h = g.spacing();
    for (std::size_t j = 0; j < radii.size(); ++j) {
      double r = radii[j];
      if (r > g.half_length - h) r = g.half_length - h;
      double plus = interpolate(f, r);
      double minus = interpolate(f, -r);
      out[j] = radii[j] == 0.0 ? f.values[c] : 0.5 * (plus + minus);
    }
    return out;
  }
  for (std::size_t j = 0; j < radii.size(); ++j) {
    double acc = 0.0;
    for (int k = 0; k < n_rays; ++k) {
      double th = 2.0 * M_PI * k / n_rays;
      acc += interpolate(f, radii[j] * std::cos(th), radii[j] * std::sin(th));
    }
    out[j] = acc / n_rays;
  }
  return out;
}

std::vector<double> radial_max(const Field& f,
                               const std::vector<double>& radii,
                               int n_rays) {
  const Grid& g = f.grid;
  std::vector<double> out(radii.size());
  if (g.dim == 1) {
    for (std::size_t j = 0; j < radii.size(); ++j)
      out[j] = std::max(interpolate(f, radii[j]), interpolate(f, -radii[j]));
    return out;
  }
  for (std::size_t j = 0; j < radii.size(); ++j) {
    double best = -HUGE_VAL;
    for (int k = 0; k < n_rays; ++k) {
      double th = 2.0 * M_PI * k / n_rays;
      best = std::max(best, interpolate(f, radii[j] * std::cos(th),
                                        radii[j] * std::sin(th)));
    }
    out[j] = best;
  }
  return out;
}

}  // namespace frackpp
