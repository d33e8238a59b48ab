#pragma once

#include <span>
#include <vector>

#include "ghs/specfun.hpp"

namespace ghs {

/// y | theta ~ N(theta, I_d), theta has the Grouped Horseshoe prior at scale tau.
struct PosteriorModel {
  int d = 1;
  double tau = 1.0;
  void validate() const;
};

/// y | psi ~ N(psi, tau1^2 I_d), psi | lambda ~ N(0, lambda^2 tau2^2 I_d),
/// lambda standard half-Cauchy.
struct SideModel {
  int d = 1;
  double tau1 = 1.0;
  double tau2 = 1.0;
  void validate() const;
};

/// Which closed form evaluates the lambda integrals. Auto picks by tau:
/// Above for tau > 1, Unit when |tau - 1| < 1e-12, Below for tau < 1, with
/// Quadrature as the fallback when a Phi_1 evaluation fails. Forcing a path
/// outside its natural range is allowed wherever Phi_1 itself is defined
/// (Unit is then only an approximation).
enum class PosteriorPath { Auto, Above, Unit, Below, Quadrature };

/// log p(y), the prior-predictive density.
double marginal_log_density(const PosteriorModel& model, std::span<const double> y,
                            const SpecFunConfig& cfg = {}, PosteriorPath path = PosteriorPath::Auto);

/// Gradient of log p(y).
std::vector<double> score(const PosteriorModel& model, std::span<const double> y,
                          const SpecFunConfig& cfg = {}, PosteriorPath path = PosteriorPath::Auto);

/// E(theta | y) = y + score(y).
std::vector<double> posterior_mean(const PosteriorModel& model, std::span<const double> y,
                                   const SpecFunConfig& cfg = {},
                                   PosteriorPath path = PosteriorPath::Auto);

/// Variable of integration used for the side-model lambda integral.
enum class ShrinkageParam {
  Beta,   ///< x = lambda^2 b / (1 + lambda^2 b) on (0, 1)
  Angle,  ///< phi = atan(lambda) on (0, pi/2)
};

/// w(y) = E(lambda^2 tau2^2 / (tau1^2 + lambda^2 tau2^2) | y), in (0, 1).
/// E(psi | y) = w(y) y.
double side_model_shrinkage(const SideModel& model, std::span<const double> y,
                            ShrinkageParam param = ShrinkageParam::Beta);

/// log C(a, b) and log D(a, b), where
///   C = int_0^inf exp(-a / (1 + lambda^2 b)) (1 + lambda^2 b)^(-d/2) / (1 + lambda^2) dlambda
/// and D carries the exponent d/2 + 1. Logs because C underflows once a
/// passes a few hundred.
struct CdIntegrals {
  double log_c = 0.0;
  double log_d = 0.0;
  double c() const;
  double d() const;
};

CdIntegrals cd_integrals(double a, double b, int d);

}  // namespace ghs
