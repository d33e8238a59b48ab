#include "ghs/risk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/core.h>

#include "ghs/distribution.hpp"
#include "ghs/errors.hpp"
#include "ghs/parallel.hpp"
#include "ghs/quadrature.hpp"
#include "ghs/random.hpp"

namespace ghs {
namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

QuadratureOptions tight_options() {
  QuadratureOptions o;
  o.rel_tol = 1e-12;
  o.abs_tol = 0.0;
  o.max_intervals = 20000;
  return o;
}

// P(|c + Z lambda| <= h) style box probability for one coordinate:
// Phi((c + h) / lambda) - Phi((c - h) / lambda), computed without
// cancellation on either side of zero.
double box_probability(double c, double h, double lambda) {
  const double s = 1.0 / (lambda * std::numbers::sqrt2);
  c = std::abs(c);
  if (c <= h) {
    // Interval straddles zero: 1 - P(left tail) - P(right tail).
    return 1.0 - 0.5 * std::erfc((h - c) * s) - 0.5 * std::erfc((h + c) * s);
  }
  return 0.5 * (std::erfc((c - h) * s) - std::erfc((c + h) * s));
}

// Prior mass of the axis-aligned cube with centre theta0 and half-side h,
// averaged over lambda ~ half-Cauchy with lambda = tan(phi).
double cube_mass(const std::vector<double>& theta0, double h) {
  std::vector<double> breaks;
  for (double c : theta0)
    for (double k : {0.1, 0.5, 1.0, 2.0})
      if (std::abs(c) > 0.0) breaks.push_back(std::atan(k * std::abs(c)));
  for (double k : {0.1, 1.0, 10.0}) breaks.push_back(std::atan(k * h));
  std::sort(breaks.begin(), breaks.end());
  auto f = [&](double phi) {
    if (phi <= 0.0 || phi >= kHalfPi) return 0.0;
    const double lambda = std::tan(phi);
    double p = 1.0;
    for (double c : theta0) p *= box_probability(c, h, lambda);
    return p;
  };
  return 2.0 / std::numbers::pi * integrate_checked(f, 0.0, kHalfPi, tight_options(), breaks);
}

// log of int N(ybar; 0, (s2 + lambda^2) I_d) p(lambda) dlambda.
double log_prior_predictive(std::span<const double> ybar, double s2) {
  const int d = static_cast<int>(ybar.size());
  double q = 0.0;
  for (double v : ybar) q += v * v;
  auto log_normal = [&](double v) {
    return -0.5 * d * std::log(2.0 * std::numbers::pi * v) - 0.5 * q / v;
  };
  const double shift = log_normal(std::max(s2, q / d));
  std::vector<double> breaks;
  const double s = std::sqrt(s2), ry = std::sqrt(q / d);
  for (double k : {0.1, 0.5, 1.0, 2.0, 10.0}) {
    breaks.push_back(std::atan(k * s));
    if (ry > 0.0) breaks.push_back(std::atan(k * ry));
  }
  std::sort(breaks.begin(), breaks.end());
  auto f = [&](double phi) {
    if (phi >= kHalfPi) return 0.0;
    const double t = std::tan(phi);
    return std::exp(log_normal(s2 + t * t) - shift);
  };
  const double v = integrate_checked(f, 0.0, kHalfPi, tight_options(), breaks);
  return shift + std::log(2.0 / std::numbers::pi * v);
}

}  // namespace

void RiskScenario::validate() const {
  if (d < 1) throw ConfigError(fmt::format("dimension must be >= 1 (got {})", d));
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw ConfigError(fmt::format("sigma must be positive (got {})", sigma));
  if (!theta0.empty() && theta0.size() != static_cast<std::size_t>(d))
    throw ConfigError(fmt::format("theta0 has length {}, expected {}", theta0.size(), d));
  for (long long n : n_grid)
    if (n < 2) throw ConfigError(fmt::format("sample sizes must be >= 2 (got {})", n));
}

bool RiskScenario::at_origin() const {
  return std::all_of(theta0.begin(), theta0.end(), [](double v) { return v == 0.0; });
}

KlBallMass kl_ball_prior_mass(const RiskScenario& scenario, long long n) {
  scenario.validate();
  if (n < 2) throw ConfigError(fmt::format("n must be >= 2 (got {})", n));
  const double radius = scenario.sigma * std::sqrt(2.0 / static_cast<double>(n));
  if (scenario.at_origin()) {
    const double m = radial_cdf(scenario.d, radius);
    return {m, m, true};
  }
  const double lower = cube_mass(scenario.theta0, radius / std::sqrt(double(scenario.d)));
  const double upper = cube_mass(scenario.theta0, radius);
  return {lower, upper, false};
}

double risk_upper_bound(const RiskScenario& scenario, long long n) {
  const KlBallMass m = kl_ball_prior_mass(scenario, n);
  const double nn = static_cast<double>(n);
  return 1.0 / nn - std::log(m.lower) / nn;
}

MonteCarloEstimate cesaro_risk_mc(const RiskScenario& scenario, long long n,
                                  const CesaroOptions& opts) {
  scenario.validate();
  if (n < 2) throw ConfigError(fmt::format("n must be >= 2 (got {})", n));
  if (opts.reps < 2) throw ConfigError(fmt::format("need at least 2 replications (got {})", opts.reps));
  const int d = scenario.d;
  std::vector<double> theta0 = scenario.theta0;
  if (theta0.empty()) theta0.assign(d, 0.0);
  const double s2 = scenario.sigma * scenario.sigma / static_cast<double>(n);
  const double s = std::sqrt(s2);

  std::vector<double> losses(static_cast<std::size_t>(opts.reps));
  parallel_for(losses.size(), opts.threads, [&](std::size_t i) {
    Rng rng(derive_seed(opts.seed, {static_cast<std::uint64_t>(i)}));
    std::vector<double> ybar(d);
    double z2 = 0.0;
    for (int j = 0; j < d; ++j) {
      const double z = rng.normal();
      z2 += z * z;
      ybar[j] = theta0[j] + s * z;
    }
    const double log_true = -0.5 * d * std::log(2.0 * std::numbers::pi * s2) - 0.5 * z2;
    losses[i] = log_true - log_prior_predictive(ybar, s2);
  });

  double mean = 0.0;
  for (double v : losses) mean += v;
  mean /= static_cast<double>(losses.size());
  double var = 0.0;
  for (double v : losses) var += (v - mean) * (v - mean);
  var /= static_cast<double>(losses.size() - 1);
  const double nn = static_cast<double>(n);
  MonteCarloEstimate out{mean / nn, std::sqrt(var / static_cast<double>(losses.size())) / nn, opts.reps};
  if (opts.target_std_error > 0.0 && out.std_error > opts.target_std_error)
    throw ResourceError(fmt::format("standard error {} above target {} after {} replications",
                                    out.std_error, opts.target_std_error, opts.reps));
  return out;
}

}  // namespace ghs
