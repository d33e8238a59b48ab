#include "ghs/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/core.h>

#include "ghs/errors.hpp"
#include "ghs/quadrature.hpp"

namespace ghs {
namespace {

constexpr double kUnitTol = 1e-12;

double squared_norm(std::span<const double> y) {
  double s = 0.0;
  for (double v : y) s += v * v;
  return s;
}

void check_length(int d, std::span<const double> y) {
  if (y.size() != static_cast<std::size_t>(d))
    throw DimensionError(fmt::format("vector has length {}, model has d={}", y.size(), d));
}

PosteriorPath resolve(double tau, PosteriorPath path) {
  if (path != PosteriorPath::Auto) return path;
  if (std::abs(tau - 1.0) < kUnitTol) return PosteriorPath::Unit;
  return tau > 1.0 ? PosteriorPath::Above : PosteriorPath::Below;
}

// log[(d+1)/(d+2) * Phi ratio] pieces: log C and log(D/C) from the closed forms.
struct ClosedForm {
  double log_c;
  double log_ratio;  // log(D / C)
};

ClosedForm closed_form(int d, double a, double b, PosteriorPath path, const SpecFunConfig& cfg) {
  const double hd = 0.5 * d;
  const double lg_ratio = std::log((d + 1.0) / (d + 2.0));
  switch (path) {
    case PosteriorPath::Unit: {
      // e^-a 1F1(1/2; (d+2)/2; a), the x = 0 face of the Above form.
      const double m0 = kummer_1f1_exp_scaled(0.5, hd + 1.0, a, cfg);
      const double m1 = kummer_1f1_exp_scaled(0.5, hd + 2.0, a, cfg);
      const double k = 0.5 * std::log(std::numbers::pi) + std::lgamma(hd + 0.5) -
                       std::log(static_cast<double>(d)) - std::lgamma(hd) - 0.5 * std::log(b);
      return {k + std::log(m0), lg_ratio + std::log(m1) - std::log(m0)};
    }
    case PosteriorPath::Above: {
      const double x = 1.0 - 1.0 / b;
      const double l0 = log_phi1(0.5, 1.0, hd + 1.0, x, a, cfg);
      const double l1 = log_phi1(0.5, 1.0, hd + 2.0, x, a, cfg);
      const double k = 0.5 * std::log(std::numbers::pi) + std::lgamma(hd + 0.5) -
                       std::log(static_cast<double>(d)) - std::lgamma(hd) - 0.5 * std::log(b);
      return {k - a + l0, lg_ratio + l1 - l0};
    }
    case PosteriorPath::Below: {
      const double x = 1.0 - b;
      const double l0 = log_phi1(hd + 0.5, 1.0, hd + 1.0, x, -a, cfg);
      const double l1 = log_phi1(hd + 1.5, 1.0, hd + 2.0, x, -a, cfg);
      const double k = 0.5 * std::log(b * std::numbers::pi) + std::lgamma(hd + 0.5) -
                       std::log(2.0) - std::lgamma(hd + 1.0);
      return {k + l0, lg_ratio + l1 - l0};
    }
    default:
      break;
  }
  const CdIntegrals q = cd_integrals(a, b, d);
  return {q.log_c, q.log_d - q.log_c};
}

ClosedForm evaluate(int d, double tau, double a, PosteriorPath path, const SpecFunConfig& cfg) {
  const PosteriorPath p = resolve(tau, path);
  const double b = tau * tau;
  if (path != PosteriorPath::Auto) return closed_form(d, a, b, p, cfg);
  try {
    return closed_form(d, a, b, p, cfg);
  } catch (const NumericalError&) {
  } catch (const DomainError&) {
  }
  return closed_form(d, a, b, PosteriorPath::Quadrature, cfg);
}

// log of the leading constant (2^(d-2) pi^(d+2))^(-1/2).
double log_marginal_constant(int d) {
  return -0.5 * ((d - 2) * std::log(2.0) + (d + 2) * std::log(std::numbers::pi));
}

}  // namespace

void PosteriorModel::validate() const {
  if (d < 1) throw ConfigError(fmt::format("dimension must be >= 1 (got {})", d));
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw ConfigError(fmt::format("tau must be positive (got {})", tau));
}

void SideModel::validate() const {
  if (d < 1) throw ConfigError(fmt::format("dimension must be >= 1 (got {})", d));
  if (!(tau1 > 0.0) || !(tau2 > 0.0) || !std::isfinite(tau1) || !std::isfinite(tau2))
    throw ConfigError(fmt::format("tau1, tau2 must be positive (got {}, {})", tau1, tau2));
}

double CdIntegrals::c() const { return std::exp(log_c); }
double CdIntegrals::d() const { return std::exp(log_d); }

CdIntegrals cd_integrals(double a, double b, int d) {
  if (!(a >= 0.0) || !(b > 0.0) || d < 1)
    throw DomainError(fmt::format("cd_integrals needs a >= 0, b > 0, d >= 1 (got {}, {}, {})", a, b, d));
  // lambda = tan(phi) cancels the half-Cauchy factor; with q = 1 / (1 + b tan^2 phi)
  // the integrands are exp(-a q) q^(d/2) and exp(-a q) q^(d/2 + 1).
  const double hd = 0.5 * d;
  auto peak = [&](double p) {
    const double q = std::min(1.0, p / std::max(a, 1e-300));
    return -a * q + p * std::log(q);
  };
  const double shift_c = peak(hd);
  const double shift_d = peak(hd + 1.0);
  std::vector<double> breaks;
  for (double k : {1.0 / 64, 1.0 / 16, 0.25, 1.0, 4.0, 16.0}) {
    const double q = k * std::max(hd, 1.0) / std::max(a, 1e-300);
    if (q < 1.0) breaks.push_back(std::atan(std::sqrt((1.0 / q - 1.0) / b)));
  }
  // The (1 + b tan^2)^-1 factor turns over at tan^2 = 1/b.
  breaks.push_back(std::atan(1.0 / std::sqrt(b)));
  std::sort(breaks.begin(), breaks.end());
  auto q_of = [&](double phi) {
    const double t = std::tan(phi);
    return 1.0 / (1.0 + b * t * t);
  };
  QuadratureOptions opts;
  opts.rel_tol = 1e-13;
  opts.abs_tol = 0.0;
  opts.max_intervals = 20000;
  const double half_pi = 0.5 * std::numbers::pi;
  const double ic = integrate_checked(
      [&](double phi) {
        if (phi >= half_pi) return 0.0;
        const double q = q_of(phi);
        return std::exp(-a * q + hd * std::log(q) - shift_c);
      },
      0.0, half_pi, opts, breaks);
  const double id = integrate_checked(
      [&](double phi) {
        if (phi >= half_pi) return 0.0;
        const double q = q_of(phi);
        return std::exp(-a * q + (hd + 1.0) * std::log(q) - shift_d);
      },
      0.0, half_pi, opts, breaks);
  return {std::log(ic) + shift_c, std::log(id) + shift_d};
}

double marginal_log_density(const PosteriorModel& model, std::span<const double> y,
                            const SpecFunConfig& cfg, PosteriorPath path) {
  model.validate();
  check_length(model.d, y);
  const double a = 0.5 * squared_norm(y);
  return log_marginal_constant(model.d) + evaluate(model.d, model.tau, a, path, cfg).log_c;
}

std::vector<double> score(const PosteriorModel& model, std::span<const double> y,
                          const SpecFunConfig& cfg, PosteriorPath path) {
  model.validate();
  check_length(model.d, y);
  const double a = 0.5 * squared_norm(y);
  const double factor = std::exp(evaluate(model.d, model.tau, a, path, cfg).log_ratio);
  std::vector<double> out(y.begin(), y.end());
  for (double& v : out) v *= -factor;
  return out;
}

std::vector<double> posterior_mean(const PosteriorModel& model, std::span<const double> y,
                                   const SpecFunConfig& cfg, PosteriorPath path) {
  std::vector<double> out = score(model, y, cfg, path);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += y[i];
  return out;
}

double side_model_shrinkage(const SideModel& model, std::span<const double> y,
                            ShrinkageParam param) {
  model.validate();
  check_length(model.d, y);
  const double A = 0.5 * squared_norm(y) / (model.tau1 * model.tau1);
  const double b = (model.tau2 * model.tau2) / (model.tau1 * model.tau1);
  if (param == ShrinkageParam::Angle) {
    const CdIntegrals q = cd_integrals(A, b, model.d);
    return -std::expm1(q.log_d - q.log_c);
  }
  // x = lambda^2 b / (1 + lambda^2 b): posterior density of x is proportional to
  // x^(-1/2) (1 - x)^((d-1)/2) (1 - beta x)^(-1) exp(A x), beta = 1 - 1/b, and w = E(x).
  const double beta = 1.0 - 1.0 / b;
  std::vector<double> breaks;
  for (double k : {0.25, 1.0, 4.0, 16.0, 64.0}) {
    if (k / A < 0.5) breaks.push_back(1.0 - k / A);
    if (b > 1.0 && k / b < 0.5) breaks.push_back(1.0 - k / b);
  }
  auto g = [&](double x) { return std::exp(A * (x - 1.0)) / (1.0 - beta * x); };
  QuadratureOptions opts;
  opts.rel_tol = 1e-13;
  opts.abs_tol = 0.0;
  opts.max_intervals = 20000;
  const double p = 0.5, q = 0.5 * (model.d + 1);
  const auto den = integrate_beta_kernel(p, q, g, opts, breaks);
  // E(1 - x) is computed directly so w near 1 keeps its relative accuracy in 1 - w.
  const auto num = integrate_beta_kernel(p, q + 1.0, g, opts, breaks);
  if (!den.converged || !num.converged)
    throw NumericalError(fmt::format("side-model quadrature missed its tolerance (A={}, b={})", A, b));
  return 1.0 - num.value / den.value;
}

}  // namespace ghs
