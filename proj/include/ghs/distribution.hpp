#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ghs/specfun.hpp"

namespace ghs {

/// Grouped Horseshoe distribution on R^d: x | lambda ~ N(0, sigma^2 lambda^2 I_d)
/// with lambda standard half-Cauchy. sigma_theta = 1 is the standard member.
struct GhsDistribution {
  int d = 1;
  double sigma_theta = 1.0;

  /// Throws ConfigError unless d >= 1 and sigma_theta > 0.
  void validate() const;
};

/// One draw from the scale-mixture representation.
struct MixtureDraw {
  double lambda = 0.0;
  std::vector<double> x;
};

/// Normalizing constant Gamma((d+1)/2) / sqrt(2 pi^(d+2)) of the standard density.
double ghs_log_constant(int d);

/// log density at ||x|| = r, standard scale. +inf at r = 0.
double ghs_log_density_radial(int d, double r, const SpecFunConfig& cfg = {});

/// log p(x) for the scaled family, p_d(x / sigma) / sigma^d. Returns +inf at
/// the origin. DimensionError when x.size() != d.
double log_density(const GhsDistribution& dist, std::span<const double> x,
                   const SpecFunConfig& cfg = {});

/// P(||x|| <= radius) under the standard distribution, by quadrature of the
/// radially reduced density.
double radial_cdf(int d, double radius, const SpecFunConfig& cfg = {});

/// n independent draws. Same seed, same draws.
std::vector<MixtureDraw> sample(const GhsDistribution& dist, std::size_t n, std::uint64_t seed);

/// Standard density at x from the half-Cauchy mixture integral, evaluated
/// by quadrature after t = 1/lambda^2. DomainError at x = 0.
double density_quadrature_oracle(int d, std::span<const double> x);

}  // namespace ghs
