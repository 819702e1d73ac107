#ifndef FRACKPP_PARAMS_HPP
#define FRACKPP_PARAMS_HPP

#include <functional>
#include <optional>
#include <string>

namespace frackpp {

/// Reaction term f(u) on [0,1]. The model assumes f(0) = f(1) = 0,
/// f concave on [0,1], and f'(1) < 0 < f'(0). The default is the
/// logistic family f(u) = a u (1 - u) with a = f'(0).
struct ReactionSpec {
  enum class Kind { logistic, custom_concave };

  Kind kind = Kind::logistic;
  double fprime0 = 1.0;
  double fprime1 = -1.0;
  std::function<double(double)> eval;

  static ReactionSpec logistic(double a = 1.0);

  /// Custom concave reaction. Endpoint slopes are measured by centered
  /// differences (step 1e-6) when not supplied by the caller.
  static ReactionSpec custom(std::function<double(double)> f,
                             std::optional<double> fp0 = std::nullopt,
                             std::optional<double> fp1 = std::nullopt);

  double operator()(double u) const { return eval(u); }

  /// Checks f(0) = f(1) = 0, slope signs, and concavity via chord slopes
  /// sampled on a 101-point grid. Throws std::invalid_argument.
  void validate() const;
};

/// Model parameters for u_t + (-Delta)^s u^m = f(u) in dimension dim.
struct ModelParams {
  int dim = 1;
  double s = 0.5;
  double m = 1.0;
  ReactionSpec reaction = ReactionSpec::logistic();

  void validate() const;  // dim >= 1, s in (0,1], m > 0
  double m_crit() const;  // (dim - 2s)+ / dim, mass-extinction threshold
  double m_one() const;   // dim / (dim + 2s), tail-regime threshold
};

/// Exponent bundle. beta = 1/(N(m-1) + 2s) and alpha = N beta control the
/// source-type self-similar scaling; sigma1/sigma2/sigma3 are the level-set
/// propagation rates of the three regimes. sigma1 is populated only for
/// m < 1, sigma3 only for m > 1, theta only for m < 1.
struct CriticalExponents {
  double m_c = 0.0;
  double m_1 = 0.0;
  double beta = 0.0;
  double alpha = 0.0;
  double sigma2 = 0.0;
  std::optional<double> sigma1;
  std::optional<double> sigma3;
  std::optional<double> theta;
};

CriticalExponents critical_exponents(const ModelParams& p);

/// Propagation regimes: R1 = (m_c, m_1) fast diffusion with heavy tails,
/// R2 = (m_1, 1] including the linear case, R3 = (1, inf) slow diffusion.
enum class Regime { R1, R2, R3 };

/// Throws std::invalid_argument for m <= m_c (extinction range) and a
/// distinct error for m = m_1 (borderline case, logarithmic corrections).
Regime classify_regime(const ModelParams& p);

std::string regime_name(Regime r);

}  // namespace frackpp

#endif
