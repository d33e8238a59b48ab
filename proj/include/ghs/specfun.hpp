#pragma once

namespace ghs {

/// Accuracy and regime controls shared by the special-function kernel.
struct SpecFunConfig {
  double rel_tol = 1e-12;
  double abs_tol = 1e-300;
  int max_terms = 10'000;
  /// |x| beyond asymptotic_switch * max(1, |b|) sends 1F1 to its large-argument expansion.
  double asymptotic_switch = 30.0;

  /// Throws ConfigError unless rel_tol > 0, max_terms >= 1, asymptotic_switch > 0.
  void validate() const;
};

/// Generalized exponential integral E_nu(x) = int_1^inf exp(-x t) t^-nu dt, x >= 0.
/// E_nu(0) = 1/(nu - 1) for nu > 1; DomainError for x < 0 or (x = 0, nu <= 1).
double gen_exp_integral(double nu, double x, const SpecFunConfig& cfg = {});

/// exp(x) * E_nu(x) evaluated jointly, finite for arbitrarily large x.
double exp_scaled_gen_exp_integral(double nu, double x, const SpecFunConfig& cfg = {});

/// Kummer's confluent hypergeometric function 1F1(a; b; x).
/// DomainError when b is zero or a negative integer.
double kummer_1f1(double a, double b, double x, const SpecFunConfig& cfg = {});

/// exp(-x) * 1F1(a; b; x), which equals 1F1(b - a; b; -x) and stays finite
/// for large positive x.
double kummer_1f1_exp_scaled(double a, double b, double x, const SpecFunConfig& cfg = {});

/// Evaluation route for the bivariate confluent hypergeometric function.
enum class Phi1Path {
  Auto,      ///< Series when its preconditions hold, else integral.
  Series,    ///< Single sum over 1F1 terms: needs 0 <= x < 1 and 0 < alpha < gamma.
  Integral,  ///< Beta-type integral: needs alpha > 0, gamma - alpha > 0, x < 1.
};

/// Natural log of Phi_1(alpha, beta, gamma, x, y). Computed without forming
/// exp(y), so large |y| is safe. DomainError when the chosen path's
/// preconditions fail (for Auto: when neither path applies).
double log_phi1(double alpha, double beta, double gamma, double x, double y,
                const SpecFunConfig& cfg = {}, Phi1Path path = Phi1Path::Auto);

/// Phi_1(alpha, beta, gamma, x, y); the double series
/// sum_{m,n} (alpha)_{m+n} (beta)_m x^m y^n / ((gamma)_{m+n} m! n!).
double phi1(double alpha, double beta, double gamma, double x, double y,
            const SpecFunConfig& cfg = {}, Phi1Path path = Phi1Path::Auto);

/// exp(-y) * Phi_1(alpha, beta, gamma, x, y).
double phi1_exp_scaled(double alpha, double beta, double gamma, double x, double y,
                       const SpecFunConfig& cfg = {}, Phi1Path path = Phi1Path::Auto);

/// Gamma(p) / Gamma(q), formed in log space. Zero when q is a pole of Gamma.
double gamma_ratio(double p, double q);

}  // namespace ghs
