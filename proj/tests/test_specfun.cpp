#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "ghs/errors.hpp"
#include "ghs/specfun.hpp"
#include "oracles.hpp"

using namespace ghs;

namespace {

double rel_diff(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("E_nu at zero is 1/(nu-1)") {
  CHECK(gen_exp_integral(1.5, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(gen_exp_integral(2.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  for (double nu = 1.05; nu < 20.0; nu += 0.37)
    CHECK(rel_diff(gen_exp_integral(nu, 0.0), 1.0 / (nu - 1.0)) < 1e-12);
}

TEST_CASE("E_nu domain errors") {
  CHECK_THROWS_AS(gen_exp_integral(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(gen_exp_integral(0.5, 0.0), DomainError);
  CHECK_THROWS_AS(gen_exp_integral(2.0, -0.1), DomainError);
  CHECK_THROWS_AS(exp_scaled_gen_exp_integral(2.0, -1.0), DomainError);
}

TEST_CASE("E_1(1) matches quadrature") {
  const double oracle = oracle::expint(1.0, 1.0);
  CHECK(oracle == doctest::Approx(0.21938393).epsilon(1e-8));
  CHECK(rel_diff(gen_exp_integral(1.0, 1.0), oracle) < 1e-11);
}

TEST_CASE("exp-scaled E_nu") {
  CHECK(exp_scaled_gen_exp_integral(1.5, 0.0) == doctest::Approx(2.0));

  // e^x E_1(x) ~ sum_k (-1)^k k! / x^(k+1) for large x.
  const double x = 1000.0;
  double asym = 0.0;
  double term = 1.0 / x;
  for (int k = 0; k < 12; ++k) {
    asym += term;
    term *= -(k + 1) / x;
  }
  CHECK(rel_diff(exp_scaled_gen_exp_integral(1.0, x), asym) < 1e-13);
  CHECK(exp_scaled_gen_exp_integral(1.0, x) == doctest::Approx(9.99001e-4).epsilon(1e-5));

  CHECK(rel_diff(exp_scaled_gen_exp_integral(2.0, 0.5), std::exp(0.5) * oracle::expint(2.0, 0.5)) <
        1e-12);

  for (double nu : {1.0, 1.5, 3.0, 5.5})
    for (double x : {0.01, 2.0, 90.0, 1e4})
      CHECK(rel_diff(exp_scaled_gen_exp_integral(nu, x), oracle::expint_scaled(nu, x)) < 1e-11);

  // Finite far past the overflow point of exp(x).
  const double big = exp_scaled_gen_exp_integral(2.5, 1e6);
  CHECK(std::isfinite(big));
  CHECK(rel_diff(big, 1.0 / (1e6 + 2.5)) < 1e-6);
}

TEST_CASE("scaled and unscaled E_nu agree") {
  for (double nu : {1.0, 1.5, 2.0, 3.3, 7.0, 12.5})
    for (double x : {1e-6, 1e-3, 0.2, 0.99, 1.0, 3.0, 17.0, 50.0}) {
      const double plain = gen_exp_integral(nu, x);
      const double scaled = exp_scaled_gen_exp_integral(nu, x) * std::exp(-x);
      CHECK_MESSAGE(rel_diff(scaled, plain) < 1e-11, "nu=" << nu << " x=" << x);
    }
}

TEST_CASE("E_nu matches quadrature on a 20x20 grid") {
  std::vector<double> nus;
  for (int k = 0; k < 20; ++k) nus.push_back(0.3 + 0.55 * k);
  std::vector<double> xs;
  for (int k = 0; k < 20; ++k) xs.push_back(1e-6 * std::pow(50.0 / 1e-6, k / 19.0));
  double worst = 0.0;
  for (double nu : nus)
    for (double x : xs) {
      const double err = rel_diff(gen_exp_integral(nu, x), oracle::expint(nu, x));
      worst = std::max(worst, err);
      CHECK_MESSAGE(err < 1e-10, "nu=" << nu << " x=" << x);
    }
  MESSAGE("worst E_nu relative error " << worst);
  // Integer orders take the logarithmic series.
  for (double nu : {1.0, 2.0, 3.0, 6.0})
    for (double x : {1e-5, 0.01, 0.5, 0.999})
      CHECK(rel_diff(gen_exp_integral(nu, x), oracle::expint(nu, x)) < 1e-10);
}

TEST_CASE("1F1 basic values") {
  CHECK(kummer_1f1(0.7, 2.3, 0.0) == 1.0);
  CHECK(kummer_1f1(1.0, 2.0, 1.0) == doctest::Approx(std::numbers::e - 1.0).epsilon(1e-14));
  CHECK(kummer_1f1(1.0, 2.0, 1.0) == doctest::Approx(1.71828183));
  CHECK_THROWS_AS(kummer_1f1(1.0, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(kummer_1f1(1.0, -1.0, 1.0), DomainError);
  CHECK_THROWS_AS(kummer_1f1(1.0, -2.0, 1.0), DomainError);
  // Terminating case: 1F1(-2; b; x) = 1 - 2x/b + x^2/(b(b+1)).
  CHECK(kummer_1f1(-2.0, 3.0, 4.0) == doctest::Approx(1.0 - 8.0 / 3.0 + 16.0 / 12.0));
}

TEST_CASE("1F1 approaches its large-argument form") {
  auto leading = [](double a, double b, double x) {
    return std::tgamma(b) / std::tgamma(a) * std::exp(x) * std::pow(x, a - b);
  };
  double prev_gap = 1.0;
  for (double x : {50.0, 200.0, 700.0}) {
    const double ratio = kummer_1f1(0.5, 3.0, x) / leading(0.5, 3.0, x);
    const double gap = std::abs(ratio - 1.0);
    CHECK(gap * x < 2.0);  // 1 + O(1/x), coefficient (b-a)(1-a) = 1.25
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  // Negative side: Gamma(b)/Gamma(b-a) (-x)^-a.
  const double x = -400.0;
  const double neg = kummer_1f1(0.5, 3.0, x) / (std::tgamma(3.0) / std::tgamma(2.5) * std::pow(-x, -0.5));
  CHECK(std::abs(neg - 1.0) * 400.0 < 2.0);
}

TEST_CASE("1F1 matches its Euler integral") {
  for (double a : {0.5, 1.0, 2.5, 6.0})
    for (double db : {0.5, 1.5, 4.0, 30.0})
      for (double x : {-300.0, -60.0, -7.5, -0.3, 0.4, 9.0, 80.0, 400.0}) {
        const double b = a + db;
        const double got = kummer_1f1(a, b, x);
        const double want = oracle::kummer(a, b, x);
        CHECK_MESSAGE(rel_diff(got, want) < 1e-10, "a=" << a << " b=" << b << " x=" << x);
        const double scaled = kummer_1f1_exp_scaled(a, b, x);
        CHECK(rel_diff(scaled, want * std::exp(-x)) < 1e-10);
      }
}

TEST_CASE("1F1 Kummer transformation") {
  for (double a : {0.25, 0.5, 1.5, 3.0, 8.0})
    for (double b : {0.5, 1.5, 3.0, 10.0, 40.0})
      for (double x : {-200.0, -40.0, -5.0, -0.5, 0.5, 5.0, 40.0, 200.0}) {
        if (!(a < b) && x < 0.0) continue;  // sign changes make relative error meaningless
        const double lhs = kummer_1f1(a, b, x);
        const double rhs = std::exp(x) * kummer_1f1(b - a, b, -x);
        CHECK_MESSAGE(rel_diff(lhs, rhs) < 1e-10, "a=" << a << " b=" << b << " x=" << x);
      }
}

TEST_CASE("Phi1 special cases") {
  // x = 0 collapses to 1F1(alpha; gamma; y).
  for (double y : {-30.0, -1.0, 0.0, 2.5, 40.0})
    for (auto path : {Phi1Path::Series, Phi1Path::Integral})
      CHECK(rel_diff(phi1(0.5, 1.7, 2.5, 0.0, y, {}, path), kummer_1f1(0.5, 2.5, y)) < 1e-10);

  // y = 0 collapses to Gauss 2F1(alpha, beta; gamma; x).
  const double alpha = 0.5, beta = 1.3, gamma = 2.2, x = 0.6;
  double f21 = 0.0, term = 1.0;
  for (int m = 0; m < 10'000; ++m) {
    f21 += term;
    term *= (alpha + m) * (beta + m) / ((gamma + m) * (m + 1)) * x;
  }
  CHECK(rel_diff(phi1(alpha, beta, gamma, x, 0.0, {}, Phi1Path::Series), f21) < 1e-12);
  CHECK(rel_diff(phi1(alpha, beta, gamma, x, 0.0, {}, Phi1Path::Integral), f21) < 1e-10);
}

TEST_CASE("Phi1 against the Gradshteyn-Ryzhik integral") {
  // nu = 1/2, lambda = 3/2, rho = 1, beta = 0.3, mu = -1.5.
  const double integral = oracle::gr_integral_half(1.5, 1.0, 0.3, -1.5);
  const double beta_fn = std::tgamma(0.5) * std::tgamma(1.5) / std::tgamma(2.0);
  const double want = integral / beta_fn;
  CHECK(rel_diff(phi1(0.5, 1.0, 2.0, 0.3, 1.5), want) < 1e-10);
  CHECK(rel_diff(phi1(0.5, 1.0, 2.0, 0.3, 1.5, {}, Phi1Path::Integral), want) < 1e-10);
}

TEST_CASE("Phi1 series and integral paths agree") {
  double worst = 0.0;
  for (double alpha : {0.5, 1.5, 3.0})
    for (double beta : {0.5, 1.0, 2.5})
      for (double dg : {0.5, 1.0, 2.5})
        for (double x : {0.0, 0.3, 0.75, 0.95})
          for (double y : {-200.0, -50.0, -3.0, 0.0, 2.0, 30.0, 200.0}) {
            const double gamma = alpha + dg;
            const double a = log_phi1(alpha, beta, gamma, x, y, {}, Phi1Path::Series);
            const double b = log_phi1(alpha, beta, gamma, x, y, {}, Phi1Path::Integral);
            const double err = std::abs(std::expm1(a - b));
            worst = std::max(worst, err);
            CHECK_MESSAGE(err < 1e-8, alpha << " " << beta << " " << gamma << " " << x << " " << y);
          }
  MESSAGE("worst Phi1 path disagreement " << worst);
}

TEST_CASE("Phi1 single-sum form uses (beta)_n: the corrected reduction") {
  const double alpha = 0.5, beta = 2.5, gamma = 2.0, x = 0.4, y = 0.6;
  const double series = phi1(alpha, beta, gamma, x, y, {}, Phi1Path::Series);
  const double corrected = oracle::phi1_double_series(alpha, beta, gamma, x, y, false);
  const double swapped = oracle::phi1_double_series(alpha, beta, gamma, x, y, true);
  CHECK(rel_diff(series, corrected) < 1e-8);
  CHECK(rel_diff(series, swapped) > 1e-3);
  // The misattributed form is Phi1 with x and y interchanged.
  CHECK(rel_diff(swapped, phi1(alpha, beta, gamma, y, x, {}, Phi1Path::Series)) < 1e-8);
}

TEST_CASE("Phi1 domain errors") {
  CHECK_THROWS_AS(log_phi1(0.5, 1.0, 2.0, 1.2, 1.0), DomainError);
  CHECK_THROWS_AS(log_phi1(2.0, 1.0, 1.5, 0.3, 1.0), DomainError);
  CHECK_THROWS_AS(log_phi1(0.5, 1.0, 2.0, -0.3, 1.0, {}, Phi1Path::Series), DomainError);
  // Negative x is fine for the integral path.
  CHECK(std::isfinite(log_phi1(0.5, 1.0, 2.0, -0.3, 1.0)));
}

TEST_CASE("SpecFunConfig validation") {
  SpecFunConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.rel_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.max_terms = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
