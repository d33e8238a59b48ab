#include "ghs/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <fmt/core.h>

#include "ghs/errors.hpp"
#include "ghs/quadrature.hpp"

namespace ghs {
namespace {

constexpr double kIntegerTol = 1e-9;

bool is_nonpositive_integer(double v) {
  return v <= 0.0 && std::abs(v - std::round(v)) < kIntegerTol;
}

// sign(Gamma(v)) for v not a pole.
double gamma_sign(double v) {
  if (v > 0.0) return 1.0;
  return (static_cast<long long>(std::floor(v)) % 2 == 0) ? 1.0 : -1.0;
}

// ---------------------------------------------------------------------------
// Generalized exponential integral
// ---------------------------------------------------------------------------

void check_expint_args(double nu, double x) {
  if (!(x >= 0.0)) throw DomainError(fmt::format("E_nu(x) needs x >= 0 (got x={})", x));
  if (x == 0.0 && !(nu > 1.0))
    throw DomainError(fmt::format("E_nu(0) diverges for nu <= 1 (got nu={})", nu));
}

// Power series for 0 < x < 1.
double expint_series(double nu, double x, const SpecFunConfig& cfg) {
  const double n_round = std::round(nu);
  if (std::abs(nu - n_round) < kIntegerTol && n_round >= 1.0) {
    // Integer order n: logarithmic term at k = n - 1.
    const int n = static_cast<int>(n_round);
    double psi = -std::numbers::egamma;
    for (int j = 1; j < n; ++j) psi += 1.0 / j;
    double lead = 1.0;  // (-x)^(n-1) / (n-1)!
    for (int j = 1; j < n; ++j) lead *= -x / j;
    double sum = lead * (psi - std::log(x));
    double power = 1.0;  // (-x)^k / k!
    for (int k = 0; k < cfg.max_terms; ++k) {
      if (k > 0) power *= -x / k;
      if (k == n - 1) continue;
      const double term = power / (k - n + 1);
      sum -= term;
      if (k > n && std::abs(term) <= cfg.rel_tol * std::abs(sum)) return sum;
    }
    throw NumericalError(fmt::format("E_{}({}) series did not converge", nu, x));
  }
  // Non-integer order: Gamma(1 - nu) x^(nu - 1) - sum (-x)^k / (k! (1 - nu + k)).
  double sum = std::tgamma(1.0 - nu) * std::pow(x, nu - 1.0);
  double power = 1.0;
  for (int k = 0; k < cfg.max_terms; ++k) {
    if (k > 0) power *= -x / k;
    const double term = power / (1.0 - nu + k);
    sum -= term;
    if (k > nu && std::abs(term) <= cfg.rel_tol * std::abs(sum)) return sum;
  }
  throw NumericalError(fmt::format("E_{}({}) series did not converge", nu, x));
}

// exp(x) E_nu(x) by the modified Lentz continued fraction, x >= 1.
double expint_scaled_cf(double nu, double x, const SpecFunConfig& cfg) {
  constexpr double tiny = 1e-300;
  double b = x + nu;
  double c = 1.0 / tiny;
  double d = (b == 0.0) ? 1.0 / tiny : 1.0 / b;
  double h = d;
  const double eps = std::max(cfg.rel_tol, std::numeric_limits<double>::epsilon());
  for (int i = 1; i <= cfg.max_terms; ++i) {
    const double an = -static_cast<double>(i) * (nu - 1.0 + i);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) <= eps * 0.5) return h;
  }
  throw NumericalError(fmt::format("E_{}({}) continued fraction did not converge", nu, x));
}

// ---------------------------------------------------------------------------
// Kummer 1F1
// ---------------------------------------------------------------------------

// exp(-log_shift) * sum_k (a)_k x^k / ((b)_k k!) for x >= 0, rescaling the
// running sum so that neither the terms nor the shift overflow.
double series_1f1(double a, double b, double x, double log_shift, const SpecFunConfig& cfg) {
  constexpr double big = 1e250;
  const double log_big = std::log(big);
  double term = 1.0;
  double sum = 1.0;
  double log_factor = -log_shift;
  for (int k = 0; k < cfg.max_terms; ++k) {
    const double ratio = (a + k) * x / ((b + k) * (k + 1));
    term *= ratio;
    sum += term;
    if (term == 0.0) return sum * std::exp(log_factor);
    if (std::abs(sum) > big) {
      sum /= big;
      term /= big;
      log_factor += log_big;
    }
    if (std::abs(ratio) < 1.0 && std::abs(term) <= 0.1 * cfg.rel_tol * std::abs(sum))
      return sum * std::exp(log_factor);
  }
  throw NumericalError(
      fmt::format("1F1({}; {}; {}) series exceeded {} terms", a, b, x, cfg.max_terms));
}

// Terminating series sum_k (a)_k z^k / ((b)_k k!) for a in {0, -1, -2, ...}.
double polynomial_1f1(double a, double b, double z) {
  const int degree = static_cast<int>(std::round(-a));
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < degree; ++k) {
    term *= (a + k) * z / ((b + k) * (k + 1));
    sum += term;
  }
  return sum;
}

// Asymptotic sum_s (p)_s (q)_s / (s! z^s) for z >> 1, truncated at the
// smallest term. Returns false when it cannot reach rel_tol.
bool asymptotic_tail(double p, double q, double z, const SpecFunConfig& cfg, double& out) {
  double term = 1.0;
  double sum = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int s = 0; s < cfg.max_terms; ++s) {
    term *= (p + s) * (q + s) / ((s + 1) * z);
    if (term == 0.0) {
      out = sum;
      return true;
    }
    if (std::abs(term) > prev) return false;  // diverging before converging
    sum += term;
    prev = std::abs(term);
    if (std::abs(term) <= 0.1 * cfg.rel_tol * std::abs(sum)) {
      out = sum;
      return true;
    }
  }
  return false;
}

bool use_asymptotic(double b, double t, const SpecFunConfig& cfg) {
  return t > cfg.asymptotic_switch * std::max(1.0, std::abs(b));
}

// 1F1(a; b; -t) for t >= 0.
double kummer_negative(double a, double b, double t, const SpecFunConfig& cfg) {
  if (t == 0.0) return 1.0;
  if (is_nonpositive_integer(a)) return polynomial_1f1(a, b, -t);
  if (is_nonpositive_integer(b - a)) return std::exp(-t) * polynomial_1f1(b - a, b, t);
  if (use_asymptotic(b, t, cfg)) {
    double tail = 0.0;
    if (asymptotic_tail(a, a - b + 1.0, t, cfg, tail))
      return gamma_ratio(b, b - a) * std::pow(t, -a) * tail;
  }
  // Kummer transform: 1F1(a; b; -t) = exp(-t) 1F1(b - a; b; t).
  return series_1f1(b - a, b, t, t, cfg);
}

void check_kummer_args(double b) {
  if (is_nonpositive_integer(b))
    throw DomainError(fmt::format("1F1 undefined for b = {} (non-positive integer)", b));
}

// ---------------------------------------------------------------------------
// Phi_1
// ---------------------------------------------------------------------------

bool series_path_valid(double alpha, double gamma, double x) {
  return x >= 0.0 && x < 1.0 && alpha > 0.0 && alpha < gamma;
}

bool integral_path_valid(double alpha, double gamma, double x) {
  return alpha > 0.0 && gamma - alpha > 0.0 && x < 1.0;
}

// exp(y) sum_n (alpha)_n (beta)_n x^n / ((gamma)_n n!) 1F1(gamma - alpha; gamma + n; -y)
// returned as a logarithm.
double log_phi1_series(double alpha, double beta, double gamma, double x, double y,
                       const SpecFunConfig& cfg) {
  double coeff = 1.0;
  double sum = 0.0;
  int small_run = 0;
  for (int n = 0; n < cfg.max_terms; ++n) {
    // For y < 0 use exp(y) 1F1(gamma - alpha; gamma + n; -y) = 1F1(alpha + n; gamma + n; y)
    // so that every 1F1 call sits at a non-positive argument.
    const double f = (y >= 0.0) ? kummer_negative(gamma - alpha, gamma + n, y, cfg)
                                : kummer_negative(alpha + n, gamma + n, -y, cfg);
    const double term = coeff * f;
    sum += term;
    if (coeff == 0.0) break;
    small_run = (std::abs(term) <= 0.1 * cfg.rel_tol * std::abs(sum)) ? small_run + 1 : 0;
    if (small_run >= 2) break;
    coeff *= (alpha + n) * (beta + n) * x / ((gamma + n) * (n + 1));
    if (n + 1 == cfg.max_terms)
      throw NumericalError(fmt::format("Phi1 series exceeded {} terms (x={})", cfg.max_terms, x));
  }
  if (!(sum > 0.0))
    throw NumericalError(fmt::format("Phi1 series produced non-positive value {}", sum));
  return std::log(sum) + std::max(y, 0.0);
}

double log_phi1_integral(double alpha, double beta, double gamma, double x, double y,
                         const SpecFunConfig& cfg) {
  const double shift = std::max(y, 0.0);
  std::vector<double> breaks;
  const double scale = std::abs(y);
  for (double k : {0.25, 1.0, 4.0, 16.0, 64.0, 256.0}) {
    if (scale > 1.0) breaks.push_back(y > 0.0 ? 1.0 - k / scale : k / scale);
    if (x > 0.5) breaks.push_back(1.0 - k * (1.0 - x) / x);
  }
  QuadratureOptions opts;
  opts.rel_tol = std::max(cfg.rel_tol, 1e-14);
  opts.abs_tol = cfg.abs_tol;
  auto r = integrate_beta_kernel(
      alpha, gamma - alpha,
      [&](double t) { return std::pow(1.0 - x * t, -beta) * std::exp(y * t - shift); }, opts,
      breaks);
  if (!r.converged || !(r.value > 0.0))
    throw NumericalError(fmt::format("Phi1 integral did not converge (value {}, error {})",
                                     r.value, r.abs_error));
  const double log_beta_fn =
      std::lgamma(alpha) + std::lgamma(gamma - alpha) - std::lgamma(gamma);
  return shift + std::log(r.value) - log_beta_fn;
}

}  // namespace

void SpecFunConfig::validate() const {
  if (!(rel_tol > 0.0) || max_terms < 1 || !(asymptotic_switch > 0.0))
    throw ConfigError(fmt::format(
        "SpecFunConfig needs rel_tol > 0, max_terms >= 1, asymptotic_switch > 0 "
        "(got {}, {}, {})",
        rel_tol, max_terms, asymptotic_switch));
}

double gamma_ratio(double p, double q) {
  if (is_nonpositive_integer(q)) return 0.0;
  if (is_nonpositive_integer(p))
    return std::numeric_limits<double>::infinity();
  return gamma_sign(p) * gamma_sign(q) * std::exp(std::lgamma(p) - std::lgamma(q));
}

double gen_exp_integral(double nu, double x, const SpecFunConfig& cfg) {
  check_expint_args(nu, x);
  if (x == 0.0) return 1.0 / (nu - 1.0);
  if (x < 1.0) return expint_series(nu, x, cfg);
  return std::exp(-x) * expint_scaled_cf(nu, x, cfg);
}

double exp_scaled_gen_exp_integral(double nu, double x, const SpecFunConfig& cfg) {
  check_expint_args(nu, x);
  if (x == 0.0) return 1.0 / (nu - 1.0);
  if (x < 1.0) return std::exp(x) * expint_series(nu, x, cfg);
  return expint_scaled_cf(nu, x, cfg);
}

double kummer_1f1(double a, double b, double x, const SpecFunConfig& cfg) {
  check_kummer_args(b);
  if (x <= 0.0) return kummer_negative(a, b, -x, cfg);
  if (is_nonpositive_integer(a)) return polynomial_1f1(a, b, x);
  if (use_asymptotic(b, x, cfg)) {
    double tail = 0.0;
    if (asymptotic_tail(b - a, 1.0 - a, x, cfg, tail)) {
      // Gamma(b)/Gamma(a) e^x x^(a-b), combined in logs to delay overflow.
      const double log_mag = std::lgamma(b) - std::lgamma(a) + x + (a - b) * std::log(x);
      return gamma_sign(b) * gamma_sign(a) * std::exp(log_mag) * tail;
    }
  }
  return series_1f1(a, b, x, 0.0, cfg);
}

double kummer_1f1_exp_scaled(double a, double b, double x, const SpecFunConfig& cfg) {
  check_kummer_args(b);
  if (x >= 0.0) return kummer_negative(b - a, b, x, cfg);
  return std::exp(-x) * kummer_negative(a, b, -x, cfg);
}

double log_phi1(double alpha, double beta, double gamma, double x, double y,
                const SpecFunConfig& cfg, Phi1Path path) {
  switch (path) {
    case Phi1Path::Series:
      if (!series_path_valid(alpha, gamma, x))
        throw DomainError(fmt::format(
            "Phi1 series path needs 0 <= x < 1 and 0 < alpha < gamma (x={}, alpha={}, gamma={})",
            x, alpha, gamma));
      return log_phi1_series(alpha, beta, gamma, x, y, cfg);
    case Phi1Path::Integral:
      if (!integral_path_valid(alpha, gamma, x))
        throw DomainError(fmt::format(
            "Phi1 integral path needs alpha > 0, gamma - alpha > 0, x < 1 "
            "(x={}, alpha={}, gamma={})",
            x, alpha, gamma));
      return log_phi1_integral(alpha, beta, gamma, x, y, cfg);
    case Phi1Path::Auto:
      break;
  }
  if (series_path_valid(alpha, gamma, x)) {
    try {
      return log_phi1_series(alpha, beta, gamma, x, y, cfg);
    } catch (const NumericalError&) {
      // x close to 1 converges too slowly; the integral has no such limit.
    }
  }
  if (integral_path_valid(alpha, gamma, x)) return log_phi1_integral(alpha, beta, gamma, x, y, cfg);
  throw DomainError(fmt::format(
      "Phi1({}, {}, {}, {}, {}) outside the domain of every evaluation path", alpha, beta, gamma,
      x, y));
}

double phi1(double alpha, double beta, double gamma, double x, double y,
            const SpecFunConfig& cfg, Phi1Path path) {
  return std::exp(log_phi1(alpha, beta, gamma, x, y, cfg, path));
}

double phi1_exp_scaled(double alpha, double beta, double gamma, double x, double y,
                       const SpecFunConfig& cfg, Phi1Path path) {
  return std::exp(log_phi1(alpha, beta, gamma, x, y, cfg, path) - y);
}

}  // namespace ghs
