#pragma once

#include <cstdint>
#include <vector>

namespace ghs {

/// y_1, ..., y_n | theta iid N(theta, sigma^2 I_d), data generated at theta0,
/// standard Grouped Horseshoe prior on theta.
struct RiskScenario {
  int d = 1;
  double sigma = 1.0;
  std::vector<double> theta0;  ///< empty means the origin
  std::vector<long long> n_grid;

  /// Throws ConfigError on d < 1, sigma <= 0, theta0 of the wrong length, or n < 2.
  void validate() const;
  bool at_origin() const;
};

/// Prior mass of the ball ||theta - theta0|| <= sigma sqrt(2/n).
/// At the origin the radial integral is exact and lower == upper. Elsewhere
/// `lower` is the mass of the inscribed hypercube (half-side r / sqrt(d)) and
/// `upper` that of the circumscribed one (half-side r).
struct KlBallMass {
  double lower = 0.0;
  double upper = 0.0;
  bool exact = false;
};

KlBallMass kl_ball_prior_mass(const RiskScenario& scenario, long long n);

/// 1/n - log(mass)/n using the lower mass, so the result is a valid bound.
double risk_upper_bound(const RiskScenario& scenario, long long n);

struct MonteCarloEstimate {
  double value = 0.0;
  double std_error = 0.0;
  long long reps = 0;
};

struct CesaroOptions {
  long long reps = 1000;
  std::uint64_t seed = 0;
  /// When positive, ResourceError is thrown if the standard error ends above it.
  double target_std_error = 0.0;
  int threads = 1;
};

/// Monte Carlo estimate of the Cesaro-average risk
/// (1/n) E log{prod p(y_i | theta0) / m(y_1..y_n)}, using the sample mean as
/// the sufficient statistic and a quadrature over lambda for m. Replication
/// i uses the seed derive_seed(seed, {i}) regardless of thread count.
MonteCarloEstimate cesaro_risk_mc(const RiskScenario& scenario, long long n,
                                  const CesaroOptions& opts);

}  // namespace ghs
