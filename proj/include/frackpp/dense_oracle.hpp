#ifndef FRACKPP_DENSE_ORACLE_HPP
#define FRACKPP_DENSE_ORACLE_HPP

#include "frackpp/grid.hpp"

namespace frackpp {

/// Normalization constant of the singular-integral form of (-Delta)^s:
/// C(N,s) = 2^{2s} s Gamma(s + N/2) / (pi^{N/2} Gamma(1-s)).
double singular_integral_constant(int N, double s);

/// Dense principal-value quadrature of
///   C(N,s) P.V. int (u(x) - u(y)) / |x-y|^{N+2s} dy
/// truncated to 5 periodic image shells, with a Taylor-based correction for
/// the singular self cell. Independent of the transform-based path; used as
/// a cross-validation oracle on small grids (<= 256 points total).
Field oracle_fractional_laplacian_dense(const Field& u, double s);

}  // namespace frackpp

#endif
