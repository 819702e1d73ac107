#ifndef FRACKPP_GRID_HPP
#define FRACKPP_GRID_HPP

#include <cstddef>
#include <vector>

namespace frackpp {

/// Uniform periodic grid on [-L, L)^dim with a power-of-two point count
/// per axis. Point i maps to x_i = -L + i h with h = 2L/n, so index n/2
/// sits exactly at the origin.
struct Grid {
  int dim = 1;
  int points_per_axis = 0;
  double half_length = 0.0;

  Grid() = default;
  Grid(int dim_, int n_, double half_length_);

  double spacing() const { return 2.0 * half_length / points_per_axis; }
  std::size_t total_points() const;
  double coord(int i) const { return -half_length + i * spacing(); }
  /// Fourier frequency of (possibly wrapped) mode index k: pi k / L.
  double freq(int k) const;
  double cell_volume() const;

  bool operator==(const Grid& o) const {
    return dim == o.dim && points_per_axis == o.points_per_axis &&
           half_length == o.half_length;
  }
};

struct Field {
  Grid grid;
  std::vector<double> values;
  double time = 0.0;

  Field() = default;
  explicit Field(const Grid& g, double fill = 0.0)
      : grid(g), values(g.total_points(), fill) {}

  double& at1d(int i) { return values[i]; }
  double& at2d(int ix, int iy) {
    return values[std::size_t(iy) * grid.points_per_axis + ix];
  }
  double at2d(int ix, int iy) const {
    return values[std::size_t(iy) * grid.points_per_axis + ix];
  }
};

double field_mass(const Field& f);
double field_min(const Field& f);
double field_max(const Field& f);

/// Value at physical point x (1D) or (x,y) (2D) by multilinear
/// interpolation with periodic wrap.
double interpolate(const Field& f, double x, double y = 0.0);

/// Radii 0, h, 2h, ... available for radial reductions on this grid.
std::vector<double> radial_grid(const Grid& g);

/// Angular average of the field over |x| = r for each radius. In 1D this
/// averages the two half-lines; in 2D it averages n_rays directions using
/// bilinear interpolation.
std::vector<double> radial_average(const Field& f,
                                   const std::vector<double>& radii,
                                   int n_rays = 64);

/// Largest nonnegative sample value along rays: max over directions of the
/// interpolated field at each radius (used by level-set tracking).
std::vector<double> radial_max(const Field& f,
                               const std::vector<double>& radii,
                               int n_rays = 64);

}  // namespace frackpp

#endif
