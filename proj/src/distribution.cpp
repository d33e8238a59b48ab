#include "ghs/distribution.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/core.h>

#include "ghs/errors.hpp"
#include "ghs/quadrature.hpp"
#include "ghs/random.hpp"

namespace ghs {
namespace {

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

// Gamma((d+1)/2) / (pi Gamma(d/2)), the constant in front of the radial CDF
// integral in the u = r^2/2 variable.
double log_radial_constant(int d) {
  return std::lgamma(0.5 * (d + 1)) - std::lgamma(0.5 * d) - std::log(std::numbers::pi);
}

}  // namespace

void GhsDistribution::validate() const {
  if (d < 1) throw ConfigError(fmt::format("dimension must be >= 1 (got {})", d));
  if (!(sigma_theta > 0.0) || !std::isfinite(sigma_theta))
    throw ConfigError(fmt::format("sigma_theta must be positive (got {})", sigma_theta));
}

double ghs_log_constant(int d) {
  return std::lgamma(0.5 * (d + 1)) - 0.5 * std::log(2.0) -
         0.5 * (d + 2) * std::log(std::numbers::pi);
}

double ghs_log_density_radial(int d, double r, const SpecFunConfig& cfg) {
  if (r == 0.0) return std::numeric_limits<double>::infinity();
  const double u = 0.5 * r * r;
  return ghs_log_constant(d) + std::log(exp_scaled_gen_exp_integral(0.5 * (d + 1), u, cfg)) -
         (d - 1) * std::log(r);
}

double log_density(const GhsDistribution& dist, std::span<const double> x,
                   const SpecFunConfig& cfg) {
  dist.validate();
  if (x.size() != static_cast<std::size_t>(dist.d))
    throw DimensionError(fmt::format("point has length {}, distribution has d={}", x.size(), dist.d));
  const double r = norm2(x) / dist.sigma_theta;
  return ghs_log_density_radial(dist.d, r, cfg) - dist.d * std::log(dist.sigma_theta);
}

double radial_cdf(int d, double radius, const SpecFunConfig& cfg) {
  if (d < 1) throw ConfigError(fmt::format("dimension must be >= 1 (got {})", d));
  if (!(radius >= 0.0)) throw DomainError(fmt::format("radius must be >= 0 (got {})", radius));
  if (radius == 0.0) return 0.0;
  const double nu = 0.5 * (d + 1);
  const double c = std::exp(log_radial_constant(d));
  const double U = 0.5 * radius * radius;
  QuadratureOptions opts;
  opts.rel_tol = std::max(cfg.rel_tol, 1e-13);
  opts.abs_tol = 0.0;
  if (U <= 1.0) {
    // u = s^4 removes the u^(-1/2) factor and the log singularity of E_1.
    auto f = [&](double s) {
      const double s2 = s * s;
      return 4.0 * s * exp_scaled_gen_exp_integral(nu, s2 * s2, cfg);
    };
    return c * integrate_checked(f, 0.0, std::pow(U, 0.25), opts);
  }
  // Complement: u = 1/w^2 maps (U, inf) to (0, U^(-1/2)).
  auto g = [&](double w) {
    if (w == 0.0) return 2.0;  // e^u E_nu(u) ~ 1/u
    const double u = 1.0 / (w * w);
    return 2.0 * u * exp_scaled_gen_exp_integral(nu, u, cfg);
  };
  const double tail = c * integrate_checked(g, 0.0, 1.0 / std::sqrt(U), opts);
  return 1.0 - tail;
}

std::vector<MixtureDraw> sample(const GhsDistribution& dist, std::size_t n, std::uint64_t seed) {
  dist.validate();
  Rng rng(seed);
  std::vector<MixtureDraw> out(n);
  for (auto& draw : out) {
    draw.lambda = rng.half_cauchy();
    draw.x.resize(dist.d);
    const double scale = dist.sigma_theta * draw.lambda;
    for (double& v : draw.x) v = scale * rng.normal();
  }
  return out;
}

double density_quadrature_oracle(int d, std::span<const double> x) {
  if (d < 1 || x.size() != static_cast<std::size_t>(d))
    throw DimensionError(fmt::format("point has length {}, expected {}", x.size(), d));
  const double r = norm2(x);
  if (r == 0.0) throw DomainError("mixture integral diverges at the origin");
  // t = 1/lambda^2, then t = s^2:
  //   p(x) = (2 pi)^(-d/2) / pi * int_0^inf 2 s^d exp(-r^2 s^2 / 2) / (1 + s^2) ds.
  const double half_r2 = 0.5 * r * r;
  auto f = [&](double s) { return 2.0 * std::pow(s, d) * std::exp(-half_r2 * s * s) / (1.0 + s * s); };
  QuadratureOptions opts;
  opts.rel_tol = 1e-13;
  opts.abs_tol = 0.0;
  opts.max_intervals = 20000;
  const double head = integrate_checked(f, 0.0, 1.0, opts);
  // s = e^z on [1, inf); exp(-r^2 s^2 / 2) is below 1e-320 past z_max.
  const double s_max = std::sqrt((750.0 + 2.0 * d * std::log(1.0 / r + 2.0) + 2.0 * d) / half_r2);
  const double z_max = std::max(std::log(s_max), 1.0);
  std::vector<double> breaks;
  for (double k : {0.25, 1.0, 1.0 * d, 4.0 * d, 16.0 * d}) {
    const double z = 0.5 * std::log(k / half_r2);
    if (z > 0.0 && z < z_max) breaks.push_back(z);
  }
  auto g = [&](double z) {
    const double s = std::exp(z);
    return f(s) * s;
  };
  const double tail = integrate_checked(g, 0.0, z_max, opts, breaks);
  return std::pow(2.0 * std::numbers::pi, -0.5 * d) / std::numbers::pi * (head + tail);
}

}  // namespace ghs
