#include "frackpp/params.hpp"

#include <cmath>
#include <stdexcept>

namespace frackpp {

ReactionSpec ReactionSpec::logistic(double a) {
  if (!(a > 0.0)) throw std::invalid_argument("logistic reaction needs a > 0");
  ReactionSpec r;
  r.kind = Kind::logistic;
  r.fprime0 = a;
  r.fprime1 = -a;
  r.eval = [a](double u) { return a * u * (1.0 - u); };
  return r;
}

ReactionSpec ReactionSpec::custom(std::function<double(double)> f,
                                  std::optional<double> fp0,
                                  std::optional<double> fp1) {
  if (!f) throw std::invalid_argument("custom reaction needs a callable");
  const double h = 1e-6;
  ReactionSpec r;
  r.kind = Kind::custom_concave;
  r.eval = std::move(f);
  // One-sided values f(-h), f(1+h) may be outside the model range; use
  // centered differences through the endpoints, where f extends smoothly.
  r.fprime0 = fp0 ? *fp0 : (r.eval(h) - r.eval(-h)) / (2.0 * h);
  r.fprime1 = fp1 ? *fp1 : (r.eval(1.0 + h) - r.eval(1.0 - h)) / (2.0 * h);
  return r;
}

void ReactionSpec::validate() const {
  if (!eval) throw std::invalid_argument("reaction has no callable");
  const double tol = 1e-9;
  if (std::fabs(eval(0.0)) > tol)
    throw std::invalid_argument("reaction must vanish at u = 0");
  if (std::fabs(eval(1.0)) > tol)
    throw std::invalid_argument("reaction must vanish at u = 1");
  if (!(fprime0 > 0.0))
    throw std::invalid_argument("reaction needs f'(0) > 0");
  if (!(fprime1 < 0.0))
    throw std::invalid_argument("reaction needs f'(1) < 0");
  // Concavity: chord slopes over a uniform grid must be non-increasing.
  const int n = 101;
  double prev_slope = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    double a = double(i) / (n - 1), b = double(i + 1) / (n - 1);
    double slope = (eval(b) - eval(a)) / (b - a);
    if (i > 0 && slope > prev_slope + 1e-9)
      throw std::invalid_argument("reaction is not concave on [0,1]");
    prev_slope = slope;
  }
}

void ModelParams::validate() const {
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  if (!(s > 0.0) || s > 1.0)
    throw std::invalid_argument("fractional order s must lie in (0, 1]");
  if (!(m > 0.0)) throw std::invalid_argument("exponent m must be positive");
  if (!std::isfinite(m) || !std::isfinite(s))
    throw std::invalid_argument("parameters must be finite");
}

double ModelParams::m_crit() const {
  double v = (dim - 2.0 * s) / dim;
  return v > 0.0 ? v : 0.0;
}

double ModelParams::m_one() const { return dim / (dim + 2.0 * s); }

CriticalExponents critical_exponents(const ModelParams& p) {
  p.validate();
  CriticalExponents e;
  const double N = p.dim;
  e.m_c = p.m_crit();
  e.m_1 = p.m_one();
  const double denom = N * (p.m - 1.0) + 2.0 * p.s;
  if (denom <= 0.0)
    throw std::invalid_argument(
        "beta undefined: N(m-1) + 2s <= 0 (m below extinction threshold)");
  e.beta = 1.0 / denom;
  e.alpha = N * e.beta;
  const double a = p.reaction.fprime0;
  e.sigma2 = a / (N + 2.0 * p.s);
  if (p.m < 1.0) {
    e.sigma1 = (1.0 - p.m) * a / (2.0 * p.s);
    e.theta = e.beta;  // 1/(2s - N(1-m)), same denominator as beta
  }
  if (p.m > 1.0)
    e.sigma3 = (1.0 + 2.0 * (p.m - 1.0) * e.beta * p.s) * a / (N + 2.0 * p.s);
  return e;
}

Regime classify_regime(const ModelParams& p) {
  p.validate();
  const double m_c = p.m_crit(), m_1 = p.m_one();
  const double tol = 1e-12 * std::max(1.0, m_1);
  if (p.m <= m_c + tol)
    throw std::invalid_argument(
        "m <= (N-2s)+/N: mass escapes to infinity, no propagation regime");
  if (std::fabs(p.m - m_1) <= tol)
    throw std::invalid_argument(
        "m = N/(N+2s) is the borderline case and is not classified");
  if (p.m < m_1) return Regime::R1;
  if (p.m <= 1.0) return Regime::R2;
  return Regime::R3;
}

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::R1: return "R1";
    case Regime::R2: return "R2";
    case Regime::R3: return "R3";
  }
  return "?";
}

}  // namespace frackpp
