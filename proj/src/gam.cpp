#include "ghs/gam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <fmt/core.h>

#include "ghs/errors.hpp"

namespace ghs {
namespace {

// All B-spline basis functions of order `degree` (or their `deriv`-th
// derivative) at x, for the clamped knot vector t. Cox-de Boor recursion.
std::vector<double> bspline_values(const std::vector<double>& t, int degree, int deriv, double x) {
  const int nk = static_cast<int>(t.size());
  if (deriv > 0) {
    const auto lower = bspline_values(t, degree - 1, deriv - 1, x);
    const int nb = nk - degree - 1;
    std::vector<double> out(nb, 0.0);
    for (int i = 0; i < nb; ++i) {
      const double d1 = t[i + degree] - t[i];
      const double d2 = t[i + degree + 1] - t[i + 1];
      double v = 0.0;
      if (d1 > 0.0) v += lower[i] / d1;
      if (d2 > 0.0) v -= lower[i + 1] / d2;
      out[i] = degree * v;
    }
    return out;
  }
  // Degree 0: indicator of the knot span holding x; the right end belongs to
  // the last non-empty span.
  std::vector<double> b(nk - 1, 0.0);
  int span = -1;
  for (int i = 0; i < nk - 1; ++i)
    if (t[i] < t[i + 1] && x >= t[i] && x < t[i + 1]) span = i;
  if (span < 0)
    for (int i = nk - 2; i >= 0; --i)
      if (t[i] < t[i + 1]) {
        span = i;
        break;
      }
  b[span] = 1.0;
  for (int p = 1; p <= degree; ++p) {
    std::vector<double> next(nk - p - 1, 0.0);
    for (int i = 0; i < nk - p - 1; ++i) {
      const double d1 = t[i + p] - t[i];
      const double d2 = t[i + p + 1] - t[i + 1];
      double v = 0.0;
      if (d1 > 0.0) v += (x - t[i]) / d1 * b[i];
      if (d2 > 0.0) v += (t[i + p + 1] - x) / d2 * b[i + 1];
      next[i] = v;
    }
    b = std::move(next);
  }
  return b;
}

double sample_sd(const Eigen::VectorXd& v) {
  const double m = v.mean();
  return std::sqrt((v.array() - m).square().mean());
}

}  // namespace

const char* to_string(EffectType e) {
  switch (e) {
    case EffectType::Zero:
      return "zero";
    case EffectType::Linear:
      return "linear";
    case EffectType::NonLinear:
      return "non-linear";
  }
  return "?";
}

EffectType effect_from_string(const std::string& s) {
  if (s == "zero") return EffectType::Zero;
  if (s == "linear") return EffectType::Linear;
  if (s == "non-linear" || s == "nonlinear") return EffectType::NonLinear;
  throw ConfigError(fmt::format("unknown effect type '{}'", s));
}

int AdditiveModelSpec::basis_size(int j) const {
  return K.size() == 1 ? K[0] : K.at(static_cast<std::size_t>(j));
}

void AdditiveModelSpec::validate() const {
  if (n < 1) throw ConfigError(fmt::format("n must be >= 1 (got {})", n));
  if (d_lin < 0 || d_nl < 0 || d_lin + d_nl < 1)
    throw ConfigError(fmt::format("need at least one predictor (d_lin={}, d_nl={})", d_lin, d_nl));
  if (K.size() != 1 && K.size() != static_cast<std::size_t>(d_nl))
    throw ConfigError(fmt::format("K has {} entries, expected 1 or {}", K.size(), d_nl));
  for (int k : K)
    if (k < 2) throw ConfigError(fmt::format("spline basis sizes must be >= 2 (got {})", k));
  if (truth.size() != static_cast<std::size_t>(d_lin + d_nl))
    throw ConfigError(
        fmt::format("truth pattern has {} entries, expected {}", truth.size(), d_lin + d_nl));
  for (int j = 0; j < d_lin; ++j)
    if (truth[j] == EffectType::NonLinear)
      throw ConfigError(fmt::format("predictor {} has no spline block but a non-linear truth", j));
  if (!(hyper.a_beta > 0.0) || !(hyper.a_u > 0.0) || !(hyper.a_eps > 0.0))
    throw ConfigError("hyperprior scales must be positive");
}

std::vector<std::string> AdditiveModelSpec::warnings() const {
  std::vector<std::string> out;
  int cols = 1 + d_lin + d_nl;
  for (int j = 0; j < d_nl; ++j) cols += basis_size(j);
  if (n <= cols)
    out.push_back(fmt::format("n = {} does not exceed the {} model columns", n, cols));
  return out;
}

std::vector<EffectType> thirds_truth(int count) {
  if (count % 3 != 0) throw ConfigError(fmt::format("{} predictors do not split into thirds", count));
  std::vector<EffectType> t;
  for (auto e : {EffectType::Zero, EffectType::Linear, EffectType::NonLinear})
    t.insert(t.end(), count / 3, e);
  return t;
}

Dataset generate_data(const AdditiveModelSpec& spec, double sigma_eps, std::uint64_t seed) {
  spec.validate();
  if (!(sigma_eps >= 0.0)) throw ConfigError(fmt::format("sigma_eps must be >= 0 (got {})", sigma_eps));
  const int n = spec.n, p = spec.predictors();
  Rng rng(seed);
  Dataset out;
  out.truth = spec.truth;
  out.x.resize(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) out.x(i, j) = rng.uniform();
  out.mean = Eigen::VectorXd::Zero(n);
  int nl_index = 0;
  for (int j = 0; j < p; ++j) {
    switch (spec.truth[j]) {
      case EffectType::Zero:
        break;
      case EffectType::Linear:
        out.mean += spec.linear_slope * (out.x.col(j).array() - 0.5).matrix();
        break;
      case EffectType::NonLinear: {
        // Phases cycle so the curves differ in shape and in linear trend.
        const double phase = 0.5 * std::numbers::pi * (nl_index++ % 4);
        out.mean += (spec.nonlinear_amplitude *
                     (2.0 * std::numbers::pi * out.x.col(j).array() + phase).sin())
                        .matrix();
        break;
      }
    }
  }
  out.y = out.mean;
  if (sigma_eps > 0.0)
    for (int i = 0; i < n; ++i) out.y[i] += sigma_eps * rng.normal();
  return out;
}

Eigen::MatrixXd spline_basis(const Eigen::VectorXd& x_in, int K) {
  if (K < 2) throw ConfigError(fmt::format("spline basis size must be >= 2 (got {})", K));
  const int n = static_cast<int>(x_in.size());
  std::vector<double> sorted(x_in.data(), x_in.data() + n);
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (static_cast<int>(sorted.size()) < K + 2)
    throw DegenerateError(
        fmt::format("spline basis of size {} needs {} distinct values, got {}", K, K + 2, sorted.size()));
  const double lo = sorted.front(), hi = sorted.back();
  Eigen::VectorXd x = (x_in.array() - lo) / (hi - lo);
  for (double& v : sorted) v = (v - lo) / (hi - lo);

  // Clamped cubic knots with K - 2 interior knots at quantiles of the distinct values.
  std::vector<double> t(4, 0.0);
  const int m = K - 2;
  for (int k = 1; k <= m; ++k) {
    const double pos = static_cast<double>(k) / (m + 1) * (sorted.size() - 1);
    const auto i0 = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - i0;
    const double q = i0 + 1 < sorted.size() ? sorted[i0] * (1 - frac) + sorted[i0 + 1] * frac : sorted[i0];
    t.push_back(q);
  }
  t.insert(t.end(), 4, 1.0);
  const int nb = K + 2;

  Eigen::MatrixXd B(n, nb);
  for (int i = 0; i < n; ++i) {
    const auto b = bspline_values(t, 3, 0, x[i]);
    for (int k = 0; k < nb; ++k) B(i, k) = b[k];
  }

  // Roughness penalty int B_k'' B_l''; B'' is piecewise linear so two-point
  // Gauss-Legendre per knot span is exact.
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(nb, nb);
  const double g = 1.0 / std::sqrt(3.0);
  for (std::size_t s = 0; s + 1 < t.size(); ++s) {
    const double a = t[s], b = t[s + 1];
    if (!(b > a)) continue;
    for (double node : {-g, g}) {
      const double xx = 0.5 * (a + b) + 0.5 * (b - a) * node;
      const auto d2 = bspline_values(t, 3, 2, xx);
      Eigen::Map<const Eigen::VectorXd> v(d2.data(), nb);
      omega += 0.5 * (b - a) * v * v.transpose();
    }
  }

  // Remove span{1, x}.
  Eigen::MatrixXd L(n, 2);
  L.col(0).setOnes();
  L.col(1) = x;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(L);
  const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, 2);
  const Eigen::MatrixXd Bt = B - Q * (Q.transpose() * B);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Bt, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd sv = svd.singularValues();
  if (!(sv[K - 1] > 1e-10 * sv[0]))
    throw DegenerateError(fmt::format("spline basis of size {} is rank deficient for these x", K));
  const Eigen::MatrixXd M = svd.matrixV().leftCols(K) * sv.head(K).cwiseInverse().asDiagonal();
  const Eigen::MatrixXd U = svd.matrixU().leftCols(K);

  // Rotate within the span so columns run from smooth to rough.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M.transpose() * omega * M);
  Eigen::MatrixXd Z = U * eig.eigenvectors();
  for (int k = 0; k < K; ++k) {
    Eigen::Index arg;
    Z.col(k).cwiseAbs().maxCoeff(&arg);
    if (Z(arg, k) < 0.0) Z.col(k) *= -1.0;
  }
  return Z;
}

Design build_design(const Dataset& data, const AdditiveModelSpec& spec) {
  spec.validate();
  const int n = static_cast<int>(data.y.size());
  const int p = spec.predictors();
  if (data.x.rows() != n || data.x.cols() != p)
    throw DimensionError(fmt::format("dataset is {}x{}, model expects {}x{}", data.x.rows(),
                                     data.x.cols(), n, p));
  Design d;
  d.p = p;
  std::vector<Eigen::MatrixXd> blocks;
  int cols = 1 + p;
  for (int j = 0; j < spec.d_nl; ++j) {
    const int pred = spec.d_lin + j;
    blocks.push_back(spline_basis(data.x.col(pred), spec.basis_size(j)));
    d.block_start.push_back(cols);
    d.block_size.push_back(spec.basis_size(j));
    d.block_predictor.push_back(pred);
    cols += spec.basis_size(j);
  }
  d.c.resize(n, cols);
  d.c.col(0).setOnes();
  for (int j = 0; j < p; ++j) {
    const Eigen::VectorXd col = data.x.col(j);
    const double sd = sample_sd(col);
    if (!(sd > 0.0)) throw DegenerateError(fmt::format("predictor {} is constant", j));
    d.c.col(1 + j) = (col.array() - col.mean()) / sd;
  }
  for (std::size_t b = 0; b < blocks.size(); ++b)
    d.c.middleCols(d.block_start[b], d.block_size[b]) = blocks[b];
  d.y_center = data.y.mean();
  d.y_scale = sample_sd(data.y);
  if (!(d.y_scale > 0.0)) throw DegenerateError("response is constant");
  d.y = (data.y.array() - d.y_center) / d.y_scale;
  return d;
}

// ---------------------------------------------------------------------------
// Gibbs sampler
// ---------------------------------------------------------------------------

GibbsSampler::GibbsSampler(Design design, const GibbsOptions& opts)
    : design_(std::move(design)), opts_(opts), rng_(opts.seed) {
  const int q = static_cast<int>(design_.c.cols());
  const int nb = static_cast<int>(design_.block_size.size());
  if (design_.c.rows() != design_.y.size())
    throw DimensionError("design and response lengths differ");
  gram_ = design_.c.transpose() * design_.c;
  cty_ = design_.c.transpose() * design_.y;
  theta_ = Eigen::VectorXd::Zero(q);
  lambda2_beta_ = Eigen::VectorXd::Ones(design_.p);
  a_lambda_beta_ = Eigen::VectorXd::Ones(design_.p);
  lambda2_u_ = Eigen::VectorXd::Ones(nb);
  a_lambda_u_ = Eigen::VectorXd::Ones(nb);
  sigma2_u_ = Eigen::VectorXd::Ones(nb);
  a_sigma_u_ = Eigen::VectorXd::Ones(nb);
  const double vy = (design_.y.array() - design_.y.mean()).square().mean();
  sigma2_eps_ = vy > 0.0 ? vy : 1.0;
  if (opts_.fixed_scales) {
    const FixedScales& f = *opts_.fixed_scales;
    if (f.lambda_beta.size() != static_cast<std::size_t>(design_.p) ||
        f.lambda_u.size() != static_cast<std::size_t>(nb) ||
        f.sigma_u.size() != static_cast<std::size_t>(nb))
      throw ConfigError("fixed scales do not match the design");
    sigma2_eps_ = f.sigma_eps * f.sigma_eps;
    sigma2_beta_ = f.sigma_beta * f.sigma_beta;
    for (int j = 0; j < design_.p; ++j) lambda2_beta_[j] = f.lambda_beta[j] * f.lambda_beta[j];
    for (int b = 0; b < nb; ++b) {
      lambda2_u_[b] = f.lambda_u[b] * f.lambda_u[b];
      sigma2_u_[b] = f.sigma_u[b] * f.sigma_u[b];
    }
  }
}

void GibbsSampler::set_response(const Eigen::VectorXd& y) {
  if (y.size() != design_.c.rows()) throw DimensionError("response length does not match the design");
  design_.y = y;
  cty_ = design_.c.transpose() * y;
}

void GibbsSampler::draw_coefficients() {
  const int q = static_cast<int>(theta_.size());
  Eigen::MatrixXd prec = gram_ / sigma2_eps_;
  prec(0, 0) += 1.0 / opts_.intercept_var;
  for (int j = 0; j < design_.p; ++j) prec(1 + j, 1 + j) += 1.0 / (sigma2_beta_ * lambda2_beta_[j]);
  for (std::size_t b = 0; b < design_.block_size.size(); ++b) {
    const double v = 1.0 / (sigma2_u_[b] * lambda2_u_[b]);
    for (int k = 0; k < design_.block_size[b]; ++k) prec(design_.block_start[b] + k, design_.block_start[b] + k) += v;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(prec);
  if (llt.info() != Eigen::Success)
    throw NumericalError(
        fmt::format("coefficient precision matrix not positive definite at iteration {}", iteration_));
  const Eigen::VectorXd mean = llt.solve(cty_ / sigma2_eps_);
  Eigen::VectorXd z(q);
  for (int i = 0; i < q; ++i) z[i] = rng_.normal();
  theta_ = mean + llt.matrixU().solve(z);
  if (!theta_.allFinite())
    throw NumericalError(fmt::format("non-finite coefficient draw at iteration {}", iteration_));
}

void GibbsSampler::draw_scales() {
  const HyperScales& h = opts_.hyper;
  // Local scales of the linear coefficients and their shared global scale.
  double ss_beta = 0.0;
  for (int j = 0; j < design_.p; ++j) {
    const double b2 = theta_[1 + j] * theta_[1 + j];
    lambda2_beta_[j] = rng_.inverse_gamma(1.0, 1.0 / a_lambda_beta_[j] + 0.5 * b2 / sigma2_beta_);
    a_lambda_beta_[j] = rng_.inverse_gamma(1.0, 1.0 + 1.0 / lambda2_beta_[j]);
    ss_beta += b2 / lambda2_beta_[j];
  }
  if (design_.p > 0) {
    sigma2_beta_ = rng_.inverse_gamma(0.5 * (design_.p + 1), 1.0 / a_sigma_beta_ + 0.5 * ss_beta);
    a_sigma_beta_ = rng_.inverse_gamma(1.0, 1.0 / (h.a_beta * h.a_beta) + 1.0 / sigma2_beta_);
  }
  // Spline blocks: one local and one global scale each.
  for (std::size_t b = 0; b < design_.block_size.size(); ++b) {
    const int K = design_.block_size[b];
    const double ss = theta_.segment(design_.block_start[b], K).squaredNorm();
    lambda2_u_[b] = rng_.inverse_gamma(0.5 * (K + 1), 1.0 / a_lambda_u_[b] + 0.5 * ss / sigma2_u_[b]);
    a_lambda_u_[b] = rng_.inverse_gamma(1.0, 1.0 + 1.0 / lambda2_u_[b]);
    sigma2_u_[b] = rng_.inverse_gamma(0.5 * (K + 1), 1.0 / a_sigma_u_[b] + 0.5 * ss / lambda2_u_[b]);
    a_sigma_u_[b] = rng_.inverse_gamma(1.0, 1.0 / (h.a_u * h.a_u) + 1.0 / sigma2_u_[b]);
  }
  const double rss = (design_.y - design_.c * theta_).squaredNorm();
  const double n = static_cast<double>(design_.y.size());
  sigma2_eps_ = rng_.inverse_gamma(0.5 * (n + 1), 1.0 / a_eps_ + 0.5 * rss);
  a_eps_ = rng_.inverse_gamma(1.0, 1.0 / (h.a_eps * h.a_eps) + 1.0 / sigma2_eps_);
}

void GibbsSampler::step() {
  draw_coefficients();
  if (!opts_.fixed_scales) draw_scales();
  ++iteration_;
}

void GibbsSampler::draw_from_prior() {
  const HyperScales& h = opts_.hyper;
  auto half_cauchy_sq = [&](double scale, double& aux) {
    aux = rng_.inverse_gamma(0.5, 1.0 / (scale * scale));
    return rng_.inverse_gamma(0.5, 1.0 / aux);
  };
  if (!opts_.fixed_scales) {
    sigma2_beta_ = half_cauchy_sq(h.a_beta, a_sigma_beta_);
    for (int j = 0; j < design_.p; ++j) lambda2_beta_[j] = half_cauchy_sq(1.0, a_lambda_beta_[j]);
    for (std::size_t b = 0; b < design_.block_size.size(); ++b) {
      sigma2_u_[b] = half_cauchy_sq(h.a_u, a_sigma_u_[b]);
      lambda2_u_[b] = half_cauchy_sq(1.0, a_lambda_u_[b]);
    }
    sigma2_eps_ = half_cauchy_sq(h.a_eps, a_eps_);
  }
  theta_[0] = std::sqrt(opts_.intercept_var) * rng_.normal();
  for (int j = 0; j < design_.p; ++j)
    theta_[1 + j] = std::sqrt(sigma2_beta_ * lambda2_beta_[j]) * rng_.normal();
  for (std::size_t b = 0; b < design_.block_size.size(); ++b) {
    const double s = std::sqrt(sigma2_u_[b] * lambda2_u_[b]);
    for (int k = 0; k < design_.block_size[b]; ++k) theta_[design_.block_start[b] + k] = s * rng_.normal();
  }
}

Eigen::VectorXd GibbsSampler::simulate_response() {
  Eigen::VectorXd y = design_.c * theta_;
  const double s = std::sqrt(sigma2_eps_);
  for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += s * rng_.normal();
  return y;
}

GibbsChain gibbs_sampler(const Design& design, const GibbsOptions& opts) {
  if (!(opts.iters > opts.burn) || opts.burn < 0)
    throw ConfigError(fmt::format("need iters > burn >= 0 (got iters={}, burn={})", opts.iters, opts.burn));
  GibbsSampler s(design, opts);
  const int keep = opts.iters - opts.burn;
  const int p = design.p;
  const int nb = static_cast<int>(design.block_size.size());
  const int nu = std::accumulate(design.block_size.begin(), design.block_size.end(), 0);
  GibbsChain ch;
  ch.beta0.resize(keep);
  ch.beta.resize(keep, p);
  ch.u.resize(keep, nu);
  ch.lambda_beta.resize(keep, p);
  ch.lambda_u.resize(keep, nb);
  ch.sigma_beta.resize(keep);
  ch.sigma_u.resize(keep, nb);
  ch.sigma_eps.resize(keep);
  ch.block_predictor = design.block_predictor;
  ch.block_size = design.block_size;
  ch.iters = opts.iters;
  ch.burn = opts.burn;
  ch.seed = opts.seed;
  for (int it = 0; it < opts.iters; ++it) {
    s.step();
    const int t = it - opts.burn;
    if (t < 0) continue;
    const Eigen::VectorXd& th = s.theta();
    ch.beta0[t] = th[0];
    ch.beta.row(t) = th.segment(1, p).transpose();
    if (nu > 0) ch.u.row(t) = th.segment(1 + p, nu).transpose();
    ch.lambda_beta.row(t) = s.lambda2_beta().cwiseSqrt().transpose();
    ch.lambda_u.row(t) = s.lambda2_u().cwiseSqrt().transpose();
    ch.sigma_beta[t] = std::sqrt(s.sigma2_beta());
    ch.sigma_u.row(t) = s.sigma2_u().cwiseSqrt().transpose();
    ch.sigma_eps[t] = std::sqrt(s.sigma2_eps());
  }
  return ch;
}

GibbsChain gibbs_sampler(const Dataset& data, const AdditiveModelSpec& spec, int iters, int burn,
                         std::uint64_t seed) {
  GibbsOptions opts;
  opts.iters = iters;
  opts.burn = burn;
  opts.seed = seed;
  opts.hyper = spec.hyper;
  return gibbs_sampler(build_design(data, spec), opts);
}

// ---------------------------------------------------------------------------
// Threshold statistics and classification
// ---------------------------------------------------------------------------

ThresholdReport gamma_statistics(const GibbsChain& chain) {
  const int T = chain.draws();
  if (T < 1) throw DegenerateError("chain has no post burn-in draws");
  const int p = static_cast<int>(chain.lambda_beta.cols());
  ThresholdReport r;
  r.gamma_beta.assign(p, 0.0);
  r.gamma_u.assign(p, std::numeric_limits<double>::quiet_NaN());
  for (int j = 0; j < p; ++j) {
    double acc = 0.0;
    for (int t = 0; t < T; ++t) {
      const double v = std::pow(chain.lambda_beta(t, j) * chain.sigma_beta[t], 2);
      acc += v / (chain.sigma_eps[t] * chain.sigma_eps[t] + v);
    }
    r.gamma_beta[j] = acc / T;
  }
  for (std::size_t b = 0; b < chain.block_predictor.size(); ++b) {
    double acc = 0.0;
    for (int t = 0; t < T; ++t) {
      const double v = std::pow(chain.lambda_u(t, b) * chain.sigma_u(t, b), 2);
      acc += v / (chain.sigma_eps[t] * chain.sigma_eps[t] + v);
    }
    r.gamma_u[chain.block_predictor[b]] = acc / T;
  }
  return r;
}

std::vector<EffectType> classify(const ThresholdReport& report, double border_beta, double border_u) {
  const std::size_t p = report.gamma_beta.size();
  if (report.gamma_u.size() != p) throw LengthError("gamma_beta and gamma_u lengths differ");
  std::vector<EffectType> out(p);
  for (std::size_t j = 0; j < p; ++j) {
    const bool lin = report.gamma_beta[j] > border_beta;
    const bool has_u = !std::isnan(report.gamma_u[j]);
    const bool nl = has_u && report.gamma_u[j] > border_u;
    if (nl)
      out[j] = EffectType::NonLinear;
    else
      out[j] = lin ? EffectType::Linear : EffectType::Zero;
  }
  return out;
}

std::vector<EffectType> classify(const ThresholdReport& report, double border) {
  return classify(report, border, border);
}

double kmeans_threshold(std::vector<double> values) {
  if (values.size() < 2) throw DegenerateError("k-means threshold needs at least 2 values");
  std::sort(values.begin(), values.end());
  if (values.front() == values.back()) throw DegenerateError("k-means threshold: all values identical");
  const std::size_t n = values.size();
  std::vector<double> s(n + 1, 0.0), s2(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    s[i + 1] = s[i] + values[i];
    s2[i + 1] = s2[i] + values[i] * values[i];
  }
  auto sse = [&](std::size_t a, std::size_t b) {  // [a, b)
    const double m = static_cast<double>(b - a);
    return (s2[b] - s2[a]) - (s[b] - s[a]) * (s[b] - s[a]) / m;
  };
  double best = std::numeric_limits<double>::infinity();
  std::size_t split = 1;
  for (std::size_t k = 1; k < n; ++k) {
    if (values[k - 1] == values[k]) continue;  // equal values stay together
    const double c = sse(0, k) + sse(k, n);
    if (c < best) {
      best = c;
      split = k;
    }
  }
  const double m1 = s[split] / static_cast<double>(split);
  const double m2 = (s[n] - s[split]) / static_cast<double>(n - split);
  return 0.5 * (m1 + m2);
}

Misclassification misclassification_rate(const std::vector<EffectType>& labels,
                                         const std::vector<EffectType>& truth) {
  if (labels.size() != truth.size())
    throw LengthError(fmt::format("{} labels against {} true effects", labels.size(), truth.size()));
  Misclassification m;
  m.total = static_cast<long>(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) m.errors += labels[i] != truth[i];
  return m;
}

Misclassification linear_vs_nonlinear_rate(const std::vector<EffectType>& labels,
                                           const std::vector<EffectType>& truth) {
  if (labels.size() != truth.size())
    throw LengthError(fmt::format("{} labels against {} true effects", labels.size(), truth.size()));
  Misclassification m;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (truth[i] == EffectType::Zero) continue;
    ++m.total;
    m.errors += labels[i] != truth[i];
  }
  return m;
}

}  // namespace ghs
