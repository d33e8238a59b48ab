#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ghs/random.hpp"

namespace ghs {

enum class EffectType { Zero, Linear, NonLinear };

const char* to_string(EffectType e);
EffectType effect_from_string(const std::string& s);

/// Half-Cauchy scales of the hyperpriors on sigma_beta, sigma_uj and sigma_eps.
struct HyperScales {
  double a_beta = 1.0;
  double a_u = 1.0;
  double a_eps = 1.0;
};

/// Gaussian additive model with Horseshoe priors on the linear coefficients
/// and Grouped Horseshoe priors on the spline blocks.
///
/// Predictors 0 .. d_lin-1 can only be zero or linear; predictors
/// d_lin .. d_lin+d_nl-1 also carry a spline block of size K[j].
struct AdditiveModelSpec {
  int n = 500;
  int d_lin = 0;
  int d_nl = 30;
  std::vector<int> K{10};  ///< per spline block, or one value for all
  HyperScales hyper;
  std::vector<EffectType> truth;  ///< length d_lin + d_nl
  double linear_slope = 2.0;        ///< linear effect c (x - 1/2)
  double nonlinear_amplitude = 1.0;  ///< non-linear effect a sin(2 pi x + phase)

  int predictors() const { return d_lin + d_nl; }
  int basis_size(int j) const;  ///< K for spline block j
  /// ConfigError on inconsistent fields.
  void validate() const;
  /// Soft problems, such as fewer observations than columns.
  std::vector<std::string> warnings() const;
};

/// The usual 10 zero, 10 linear, 10 non-linear pattern scaled to `count`
/// predictors (count must be a multiple of 3).
std::vector<EffectType> thirds_truth(int count);

struct Dataset {
  Eigen::MatrixXd x;     ///< n x p predictors in [0, 1]
  Eigen::VectorXd y;     ///< response
  Eigen::VectorXd mean;  ///< noiseless mean surface
  std::vector<EffectType> truth;
};

/// Draws predictors iid Uniform(0, 1), applies the configured effects and
/// adds N(0, sigma_eps^2) noise. Deterministic in the seed.
Dataset generate_data(const AdditiveModelSpec& spec, double sigma_eps, std::uint64_t seed);

/// Spline block for one predictor: cubic B-splines on K - 2 interior
/// quantile knots, projected off span{1, x} and rotated so the columns are
/// orthonormal and ordered from smoothest to roughest by the integrated
/// squared second derivative. DegenerateError if x has fewer than K + 2
/// distinct values.
Eigen::MatrixXd spline_basis(const Eigen::VectorXd& x, int K);

/// Design built from a dataset: [1, standardized x columns, spline blocks],
/// with the response standardized.
struct Design {
  Eigen::MatrixXd c;
  Eigen::VectorXd y;
  int p = 0;                      ///< linear columns
  std::vector<int> block_start;   ///< column of the first entry of block j
  std::vector<int> block_size;
  std::vector<int> block_predictor;  ///< predictor index owning block j
  double y_center = 0.0;
  double y_scale = 1.0;
};

Design build_design(const Dataset& data, const AdditiveModelSpec& spec);

/// Scale parameters held fixed when GibbsOptions::fixed_scales is set.
struct FixedScales {
  double sigma_eps = 1.0;
  double sigma_beta = 1.0;
  std::vector<double> lambda_beta;  ///< one per linear column
  std::vector<double> sigma_u;
  std::vector<double> lambda_u;
};

struct GibbsOptions {
  int iters = 6000;  ///< total iterations, burn-in included
  int burn = 1000;
  std::uint64_t seed = 0;
  HyperScales hyper;
  double intercept_var = 1e10;  ///< prior variance of the intercept
  std::optional<FixedScales> fixed_scales;
};

/// Post burn-in draws. Row t of each matrix is draw t.
struct GibbsChain {
  Eigen::VectorXd beta0;
  Eigen::MatrixXd beta;       ///< draws x p
  Eigen::MatrixXd u;          ///< draws x (sum K)
  Eigen::MatrixXd lambda_beta;  ///< draws x p
  Eigen::MatrixXd lambda_u;     ///< draws x blocks
  Eigen::VectorXd sigma_beta;
  Eigen::MatrixXd sigma_u;      ///< draws x blocks
  Eigen::VectorXd sigma_eps;
  std::vector<int> block_predictor;
  std::vector<int> block_size;
  int iters = 0;
  int burn = 0;
  std::uint64_t seed = 0;

  int draws() const { return static_cast<int>(beta0.size()); }
};

/// One Gibbs sweep at a time. Exposed for tests that need to interleave
/// sampler steps with other moves.
class GibbsSampler {
 public:
  GibbsSampler(Design design, const GibbsOptions& opts);

  /// Full sweep: coefficients, then local and global scales, then noise.
  void step();
  /// Replaces the response; Design::y is updated and cached products redone.
  void set_response(const Eigen::VectorXd& y);
  /// Simulates every parameter from the prior and overwrites the state.
  void draw_from_prior();
  /// y drawn from the likelihood at the current state.
  Eigen::VectorXd simulate_response();

  const Eigen::VectorXd& theta() const { return theta_; }
  const Eigen::VectorXd& lambda2_beta() const { return lambda2_beta_; }
  const Eigen::VectorXd& lambda2_u() const { return lambda2_u_; }
  double sigma2_beta() const { return sigma2_beta_; }
  const Eigen::VectorXd& sigma2_u() const { return sigma2_u_; }
  double sigma2_eps() const { return sigma2_eps_; }
  const Design& design() const { return design_; }
  long iteration() const { return iteration_; }
  Rng& rng() { return rng_; }

 private:
  void draw_coefficients();
  void draw_scales();

  Design design_;
  GibbsOptions opts_;
  Eigen::MatrixXd gram_;
  Eigen::VectorXd cty_;
  Rng rng_;
  Eigen::VectorXd theta_;
  Eigen::VectorXd lambda2_beta_, a_lambda_beta_;
  Eigen::VectorXd lambda2_u_, a_lambda_u_;
  double sigma2_beta_ = 1.0, a_sigma_beta_ = 1.0;
  Eigen::VectorXd sigma2_u_, a_sigma_u_;
  double sigma2_eps_ = 1.0, a_eps_ = 1.0;
  long iteration_ = 0;
};

/// Runs `iters` sweeps and keeps the last iters - burn. NumericalError names
/// the iteration if the coefficient precision matrix is not positive definite.
GibbsChain gibbs_sampler(const Dataset& data, const AdditiveModelSpec& spec, int iters, int burn,
                         std::uint64_t seed);
GibbsChain gibbs_sampler(const Design& design, const GibbsOptions& opts);

struct Misclassification {
  long errors = 0;
  long total = 0;
  double rate() const { return total ? static_cast<double>(errors) / total : 0.0; }
  double percent() const { return 100.0 * rate(); }
};

struct ThresholdReport {
  std::vector<double> gamma_beta;  ///< per predictor
  std::vector<double> gamma_u;     ///< per predictor, NaN when there is no spline block
  std::vector<EffectType> labels;
  double border_beta = 0.5;
  double border_u = 0.5;
  std::vector<EffectType> truth;  ///< empty when unknown
  std::optional<Misclassification> misclassification;
};

/// Posterior means of gamma_beta_j = lambda^2 sigma_beta^2 / (sigma_eps^2 + lambda^2 sigma_beta^2)
/// and the spline-block analogue, computed draw by draw.
ThresholdReport gamma_statistics(const GibbsChain& chain);

/// Zero if max(gamma_beta, gamma_u) <= border, linear if gamma_beta > border
/// and gamma_u <= border, otherwise non-linear. Predictors without a spline
/// block are zero or linear on gamma_beta alone.
std::vector<EffectType> classify(const ThresholdReport& report, double border);
std::vector<EffectType> classify(const ThresholdReport& report, double border_beta,
                                 double border_u);

/// Optimal two-cluster split of the sorted values (least within-cluster sum
/// of squares); returns the midpoint of the two cluster means.
/// DegenerateError when all values coincide or fewer than 2 are given.
double kmeans_threshold(std::vector<double> values);

/// Fraction of mismatched labels. LengthError on unequal lengths.
Misclassification misclassification_rate(const std::vector<EffectType>& labels,
                                         const std::vector<EffectType>& truth);

/// Mismatches counted only over predictors whose true effect is linear or
/// non-linear (the linear versus non-linear comparison).
Misclassification linear_vs_nonlinear_rate(const std::vector<EffectType>& labels,
                                           const std::vector<EffectType>& truth);

}  // namespace ghs
