#ifndef FRACKPP_SPECIAL_HPP
#define FRACKPP_SPECIAL_HPP

#include <functional>
#include <vector>

namespace frackpp {

/// Bessel function of the first kind J_order(z) for z >= 0. Half-integer
/// orders -1/2, 1/2, 3/2, 5/2 use their trigonometric closed forms;
/// non-negative integer orders delegate to the standard library.
double bessel_j(double order, double z);

/// k-th positive zero of J_order (k >= 1) for orders -1/2, 0, 1/2, 1.
/// Half-integer zeros are exact; integer orders use a McMahon expansion
/// refined by Newton steps.
double bessel_j_zero(double order, int k);

struct GaussLegendre {
  std::vector<double> nodes;    // on (-1, 1)
  std::vector<double> weights;
};

/// Nodes and weights computed once per order and cached.
const GaussLegendre& gauss_legendre(int n);

/// Integral of f over [a, b] with a fixed-order rule.
double integrate_gl(const std::function<double(double)>& f, double a,
                    double b, int order = 16);

/// Composite Gauss-Legendre with panels geometrically graded toward the
/// left endpoint. Handles integrable algebraic endpoint behavior (x^p with
/// p > -1 relative to a) to near machine accuracy.
double integrate_graded_left(const std::function<double(double)>& f,
                             double a, double b, int order = 16,
                             int levels = 48);

struct AccelResult {
  double value = 0.0;
  double err_estimate = 0.0;
};

/// Wynn epsilon extrapolation of a sequence of partial sums. Used to sum
/// alternating lobe series from oscillatory integrals long before the raw
/// terms decay. Returns the most converged even-column entry together with
/// a stability-based error estimate.
AccelResult wynn_epsilon(const std::vector<double>& partial_sums);

struct LinFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_abs_residual = 0.0;
};

LinFit linfit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace frackpp

#endif
