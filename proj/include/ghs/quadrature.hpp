#pragma once

#include <functional>
#include <span>

namespace ghs {

struct QuadratureOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-300;
  int max_intervals = 4000;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  int intervals = 0;
  bool converged = false;
};

using Integrand = std::function<double(double)>;

/// Adaptive 15-point Gauss-Kronrod quadrature on the finite interval [a, b].
///
/// The interval is first cut at every breakpoint lying strictly inside it,
/// then the piece with the largest error estimate is bisected until the
/// total estimated error drops below max(abs_tol, rel_tol * |value|).
/// Breakpoints are how callers point the integrator at narrow features it
/// would otherwise step over (peaks of width 1/a near an endpoint, say).
QuadratureResult integrate(const Integrand& f, double a, double b,
                           const QuadratureOptions& opts = {},
                           std::span<const double> breakpoints = {});

/// Integral of t^(p-1) (1-t)^(q-1) g(t) over (0, 1) for p, q > 0.
///
/// Each half of the interval is mapped by t = s^(1/p) (resp. 1 - t = s^(1/q))
/// which absorbs the endpoint power exactly, so `g` only has to be smooth.
/// `t_breaks` are breakpoints in the original t variable.
QuadratureResult integrate_beta_kernel(double p, double q, const Integrand& g,
                                       const QuadratureOptions& opts = {},
                                       std::span<const double> t_breaks = {});

/// Like `integrate` but throws NumericalError when the error target is missed.
double integrate_checked(const Integrand& f, double a, double b,
                         const QuadratureOptions& opts = {},
                         std::span<const double> breakpoints = {});

}  // namespace ghs
