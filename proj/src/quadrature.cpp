#include "ghs/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include <fmt/core.h>

#include "ghs/errors.hpp"

namespace ghs {
namespace {

// Kronrod abscissae (positive half, descending) and weights; the Gauss
// 7-point rule uses the odd-indexed abscissae.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Piece& other) const { return error < other.error; }
};

Piece gauss_kronrod(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double abs_sum = std::abs(kronrod);
  std::array<double, 7> f1{};
  std::array<double, 7> f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    const double pair = f1[j] + f2[j];
    kronrod += kWgk[j] * pair;
    abs_sum += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  // QUADPACK error heuristic: scale |K - G| against the mean deviation.
  const double mean = 0.5 * kronrod;
  double asc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j)
    asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  asc *= std::abs(half);
  double err = std::abs((kronrod - gauss) * half);
  if (asc != 0.0 && err != 0.0)
    err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  const double resabs = abs_sum * std::abs(half);
  const double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
    err = std::max(err, 50.0 * eps * resabs);
  return {a, b, kronrod * half, err};
}

}  // namespace

QuadratureResult integrate(const Integrand& f, double a, double b,
                           const QuadratureOptions& opts,
                           std::span<const double> breakpoints) {
  QuadratureResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }
  std::vector<double> cuts{a};
  for (double c : breakpoints)
    if (c > a && c < b) cuts.push_back(c);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<Piece> heap;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Piece p = gauss_kronrod(f, cuts[i], cuts[i + 1]);
    total += p.value;
    total_err += p.error;
    heap.push(p);
  }
  int count = static_cast<int>(heap.size());
  auto target = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };
  bool stuck = false;
  while (total_err > target() && count < opts.max_intervals && !stuck) {
    if (!std::isfinite(total)) break;
    Piece worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      stuck = true;
      break;
    }
    heap.pop();
    Piece left = gauss_kronrod(f, worst.a, mid);
    Piece right = gauss_kronrod(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++count;
  }
  // Re-sum to drop accumulated cancellation in the running totals.
  total = 0.0;
  total_err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    total_err += heap.top().error;
    heap.pop();
  }
  out.value = sign * total;
  out.abs_error = total_err;
  out.intervals = count;
  out.converged = std::isfinite(total) && total_err <= target();
  return out;
}

QuadratureResult integrate_beta_kernel(double p, double q, const Integrand& g,
                                       const QuadratureOptions& opts,
                                       std::span<const double> t_breaks) {
  if (!(p > 0.0) || !(q > 0.0))
    throw DomainError(fmt::format("beta kernel exponents must be positive (p={}, q={})", p, q));
  // Left half: t = s^(1/p), s in (0, 2^-p);  t^(p-1) dt = ds / p.
  const double s_left = std::pow(0.5, p);
  std::vector<double> left_breaks;
  std::vector<double> right_breaks;
  for (double t : t_breaks) {
    if (t > 0.0 && t < 0.5) left_breaks.push_back(std::pow(t, p));
    if (t > 0.5 && t < 1.0) right_breaks.push_back(std::pow(1.0 - t, q));
  }
  auto left = integrate(
      [&](double s) {
        const double t = std::pow(s, 1.0 / p);
        return std::pow(1.0 - t, q - 1.0) * g(t) / p;
      },
      0.0, s_left, opts, left_breaks);
  // Right half: 1 - t = s^(1/q), s in (0, 2^-q).
  const double s_right = std::pow(0.5, q);
  auto right = integrate(
      [&](double s) {
        const double u = std::pow(s, 1.0 / q);
        return std::pow(1.0 - u, p - 1.0) * g(1.0 - u) / q;
      },
      0.0, s_right, opts, right_breaks);
  QuadratureResult out;
  out.value = left.value + right.value;
  out.abs_error = left.abs_error + right.abs_error;
  out.intervals = left.intervals + right.intervals;
  out.converged =
      std::isfinite(out.value) &&
      out.abs_error <= std::max(opts.abs_tol, opts.rel_tol * std::abs(out.value)) * 1.0000001;
  return out;
}

double integrate_checked(const Integrand& f, double a, double b,
                         const QuadratureOptions& opts,
                         std::span<const double> breakpoints) {
  auto r = integrate(f, a, b, opts, breakpoints);
  if (!r.converged)
    throw NumericalError(fmt::format(
        "quadrature on [{}, {}] missed its tolerance (value {}, error {}, {} intervals)", a, b,
        r.value, r.abs_error, r.intervals));
  return r.value;
}

}  // namespace ghs
