#include <boost/math/special_functions/gamma.hpp>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "ghs/distribution.hpp"
#include "ghs/errors.hpp"
#include "ghs/risk.hpp"
#include "oracles.hpp"

using namespace ghs;

namespace {

// P(||theta|| <= R) = E_lambda P(chi^2_d <= R^2 / lambda^2), lambda = tan(phi).
double origin_mass_oracle(int d, double R) {
  auto f = [&](double phi) {
    if (phi <= 0.0) return 1.0;
    if (phi >= std::numbers::pi / 2) return 0.0;
    const double lam = std::tan(phi);
    return boost::math::gamma_p(0.5 * d, 0.5 * R * R / (lam * lam));
  };
  const std::vector<double> br{std::atan(0.1 * R), std::atan(R), std::atan(10.0 * R)};
  return 2.0 / std::numbers::pi * integrate_checked(f, 0.0, std::numbers::pi / 2, oracle::tight(1e-12), br);
}

double lead_constant(int d) {
  return std::tgamma(0.5 * (d + 1)) / (std::numbers::pi * std::tgamma(0.5 * d));
}

// Least-squares slope of ys on xs.
double slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= ys.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

std::vector<long long> log_grid() {
  std::vector<long long> ns;
  for (int k = 0; k <= 10; ++k) ns.push_back(std::llround(std::pow(10.0, 3.0 + 0.5 * k)));
  return ns;
}

}  // namespace

TEST_CASE("origin ball mass matches the chi-square mixture") {
  for (int d : {1, 2, 3, 5})
    for (double sigma : {0.5, 1.0, 3.0})
      for (long long n : {2LL, 10LL, 1000LL, 1000000LL}) {
        const RiskScenario sc{d, sigma, {}, {}};
        const auto m = kl_ball_prior_mass(sc, n);
        CHECK(m.exact);
        const double want = origin_mass_oracle(d, sigma * std::sqrt(2.0 / n));
        CHECK_MESSAGE(std::abs(m.lower / want - 1.0) < 1e-9, "d=" << d << " sigma=" << sigma << " n=" << n);
      }
}

TEST_CASE("leading terms of the origin mass") {
  const double n = 1e6;
  for (int d : {2, 3}) {
    const double lead = lead_constant(d) * 4.0 / (d - 1) / std::sqrt(n);
    const double m = kl_ball_prior_mass({d, 1.0, {}, {}}, 1'000'000).lower;
    CHECK_MESSAGE(std::abs(m / lead - 1.0) < 0.02, "d=" << d);
  }
  // d = 1: pi^(-3/2) 2 sigma n^(-1/2) (log n + 2 - gamma - 2 log sigma) + O(n^(-3/2) log n).
  for (double sigma : {0.5, 1.0, 2.0}) {
    const double m = kl_ball_prior_mass({1, sigma, {}, {}}, 1'000'000).lower;
    const double c = std::pow(std::numbers::pi, -1.5) * 2.0 * sigma / std::sqrt(n);
    const double two_term = c * (std::log(n) + 2.0 - std::numbers::egamma - 2.0 * std::log(sigma));
    CHECK(std::abs(m / two_term - 1.0) < 1e-4);
    // Against the log n term alone the gap is the slowly vanishing
    // (2 - gamma - 2 log sigma) / log n.
    const double ratio = m / (c * std::log(n));
    CHECK(ratio - 1.0 ==
          doctest::Approx((2.0 - std::numbers::egamma - 2.0 * std::log(sigma)) / std::log(n)).epsilon(1e-3));
  }
}

TEST_CASE("mass is monotone and stays in (0, 1)") {
  for (int d : {1, 2, 3}) {
    double prev = 1.0;
    for (long long n : {2LL, 5LL, 50LL, 1000LL, 100000LL, 100000000LL}) {
      const double m = kl_ball_prior_mass({d, 1.0, {}, {}}, n).lower;
      CHECK(m > 0.0);
      CHECK(m < 1.0);
      CHECK(m < prev);
      prev = m;
    }
    double last = 0.0;
    for (double sigma : {0.1, 1.0, 10.0}) {
      const double m = kl_ball_prior_mass({d, sigma, {}, {}}, 100).lower;
      CHECK(m > last);
      last = m;
    }
    CHECK(kl_ball_prior_mass({d, 1e5, {}, {}}, 2).lower > 0.999);
  }
  CHECK_THROWS_AS(kl_ball_prior_mass({1, 1.0, {}, {}}, 1), ConfigError);
  CHECK_THROWS_AS(kl_ball_prior_mass({2, 1.0, {1.0}, {}}, 10), ConfigError);
}

TEST_CASE("scaled mass stabilizes for d >= 2") {
  for (int d : {2, 3, 5}) {
    const double a = kl_ball_prior_mass({d, 1.0, {}, {}}, 1'000'000).lower * 1e3;
    const double b = kl_ball_prior_mass({d, 1.0, {}, {}}, 100'000'000).lower * 1e4;
    CHECK(std::abs(a / b - 1.0) < 0.02);
  }
}

TEST_CASE("log log n term appears only for d = 1") {
  for (int d : {1, 2, 3}) {
    const RiskScenario sc{d, 1.0, {}, log_grid()};
    std::vector<double> xs, ys;
    for (long long n : sc.n_grid) {
      const double nn = static_cast<double>(n);
      xs.push_back(std::log(std::log(nn)));
      ys.push_back(nn * risk_upper_bound(sc, n) - 0.5 * std::log(nn));
    }
    const double coef = -slope(xs, ys);
    MESSAGE("d=" << d << " coefficient of -log log n: " << coef);
    if (d == 1)
      CHECK(std::abs(coef - 1.0) < 0.15);
    else
      CHECK(std::abs(coef) < 0.15);
    if (d > 1) {
      const auto [lo, hi] = std::minmax_element(ys.begin(), ys.end());
      CHECK(*hi - *lo < 0.05);
    }
  }
}

TEST_CASE("off-origin mass brackets and rate") {
  const RiskScenario sc{2, 1.0, {1.0, 1.0}, log_grid()};
  std::vector<double> vals;
  for (long long n : sc.n_grid) {
    const auto m = kl_ball_prior_mass(sc, n);
    CHECK_FALSE(m.exact);
    CHECK(m.lower < m.upper);
    // The ball lies between the two cubes, whose area ratio is 2.
    CHECK(m.upper / m.lower == doctest::Approx(2.0).epsilon(1e-3));
    const double nn = static_cast<double>(n);
    vals.push_back(nn * risk_upper_bound(sc, n) - 0.5 * sc.d * std::log(nn));
  }
  const auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
  CHECK(*hi - *lo < 0.05);
  // Small cube: mass ~ (2h)^d p(theta0).
  const long long n = 100'000'000;
  const double h = std::sqrt(2.0 / n) / std::sqrt(2.0);
  const std::vector<double> t0{1.0, 1.0};
  const double approx = 4.0 * h * h * std::exp(log_density({2, 1.0}, t0));
  CHECK(kl_ball_prior_mass(sc, n).lower / approx == doctest::Approx(1.0).epsilon(1e-6));
  // A zero coordinate mixed with a non-zero one.
  const RiskScenario mixed{2, 1.0, {0.0, 2.0}, {}};
  const std::vector<double> t1{0.0, 2.0};
  const double h2 = std::sqrt(2.0 / 1e8);
  CHECK(kl_ball_prior_mass(mixed, n).upper / (4.0 * h2 * h2 * std::exp(log_density({2, 1.0}, t1))) ==
        doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("Monte Carlo Cesaro risk") {
  const RiskScenario sc{1, 1.0, {}, {}};
  CesaroOptions opts;
  opts.reps = 2000;
  opts.seed = 11;
  const auto est = cesaro_risk_mc(sc, 100, opts);
  const double bound = risk_upper_bound(sc, 100);
  MESSAGE("R_100 estimate " << est.value << " +- " << est.std_error << ", bound " << bound);
  CHECK(est.value <= bound + 3.0 * est.std_error);
  CHECK(est.value > 0.0);

  opts.reps = 500;
  const auto small = cesaro_risk_mc(sc, 2, opts);
  CHECK(small.value >= 0.0);

  // Thread count does not change the answer.
  opts.reps = 64;
  opts.threads = 1;
  const auto a = cesaro_risk_mc({2, 1.0, {0.5, -0.5}, {}}, 50, opts);
  opts.threads = 3;
  const auto b = cesaro_risk_mc({2, 1.0, {0.5, -0.5}, {}}, 50, opts);
  CHECK(a.value == b.value);
  CHECK(a.std_error == b.std_error);

  opts.threads = 1;
  opts.target_std_error = 1e-12;
  CHECK_THROWS_AS(cesaro_risk_mc(sc, 10, opts), ResourceError);
  opts.reps = 1;
  opts.target_std_error = 0.0;
  CHECK_THROWS_AS(cesaro_risk_mc(sc, 10, opts), ConfigError);
}

TEST_CASE("Cesaro risk away from the origin follows d log n / (2n)") {
  const RiskScenario sc{1, 1.0, {5.0}, {}};
  CesaroOptions opts;
  opts.reps = 1000;
  opts.seed = 5;
  // Clarke-Barron: n R_n = (d/2) log(n / (2 pi e sigma^2)) - log p(theta0) + o(1).
  const double log_p0 = log_density({1, 1.0}, sc.theta0);
  std::vector<double> scaled;
  for (long long n : {100LL, 1000LL}) {
    const double nn = static_cast<double>(n);
    const auto est = cesaro_risk_mc(sc, n, opts);
    scaled.push_back(est.value * nn / std::log(nn));
    MESSAGE("n=" << n << " R_n n / log n = " << scaled.back());
    const double cb = 0.5 * std::log(nn / (2.0 * std::numbers::pi * std::exp(1.0))) - log_p0;
    CHECK(std::abs(est.value * nn - cb) < 0.1 + 3.0 * est.std_error * nn);
    CHECK(est.value <= risk_upper_bound(sc, n) + 3.0 * est.std_error);
  }
  // The ratio falls toward d/2 as the O(1/n) constant is diluted.
  CHECK(scaled[1] < scaled[0]);
  CHECK(scaled[1] > 0.5);
}
