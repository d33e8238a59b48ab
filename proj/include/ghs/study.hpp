#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "ghs/gam.hpp"

namespace ghs {

/// Grid of simulation cells (n x sigma_eps) with replications per cell.
struct StudyConfig {
  std::vector<int> n{500, 1000, 2000};
  std::vector<double> sigma_eps{0.25, 0.5, 1.0, 2.0};
  int reps = 6;
  int d_lin = 0;
  int d_nl = 30;
  std::vector<int> K{10};
  std::vector<EffectType> truth;  ///< empty: thirds pattern
  HyperScales hyper;
  double linear_slope = 2.0;
  double nonlinear_amplitude = 1.0;
  int iters = 6000;
  int burn = 1000;
  std::uint64_t seed = 1;
  int threads = 1;
  bool export_chains = false;

  AdditiveModelSpec spec_for(int n) const;
  void validate() const;
};

StudyConfig study_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const StudyConfig& c);

/// Misclassification of one labelling, split by kind of error.
struct ErrorTally {
  Misclassification three_way;
  Misclassification linear_vs_nonlinear;
  long linear_as_nonlinear = 0;
  long zero_as_nonlinear = 0;
  long other = 0;

  void add(const std::vector<EffectType>& labels, const std::vector<EffectType>& truth);
};

struct Replication {
  int cell = 0;
  int rep = 0;
  int n = 0;
  double sigma_eps = 0.0;
  std::uint64_t data_seed = 0;
  std::uint64_t chain_seed = 0;
  ThresholdReport report;          ///< labels at border 1/2
  double kmeans_border_u = 0.5;    ///< k-means border on the gamma_u values
  std::vector<EffectType> kmeans_labels;
  bool failed = false;
  std::string error;
};

struct CellSummary {
  int n = 0;
  double sigma_eps = 0.0;
  int reps = 0;
  int failures = 0;
  ErrorTally half;
  ErrorTally kmeans;
};

struct StudyResult {
  std::vector<Replication> replications;  ///< cell-major, then replication
  std::vector<CellSummary> cells;
};

/// Runs every (cell, replication) task, `threads` at a time. Task seeds are
/// derived from the master seed and the task coordinates, so the result does
/// not depend on the thread count. A replication whose sampler throws is
/// recorded as failed and the study carries on. When `chain_dir` is set and
/// export_chains is on, each chain is written there as CSV.
StudyResult run_study(const StudyConfig& config, const std::filesystem::path& chain_dir = {});

/// Summaries recomputed from replication records.
std::vector<CellSummary> summarize(const StudyConfig& config, const std::vector<Replication>& reps);

nlohmann::json to_json(const ThresholdReport& r);
ThresholdReport threshold_report_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Replication& r);
Replication replication_from_json(const nlohmann::json& j);

/// Writes `content` to a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Columnar CSV of the chain draws, one parameter per column with a header.
std::string chain_csv(const GibbsChain& chain);

std::string aggregate_csv(const std::vector<CellSummary>& cells);
/// One row per (cell, replication, predictor) with both gamma statistics.
std::string strip_chart_csv(const std::vector<Replication>& reps);

/// Writes config.json, reports/cell<c>_rep<r>.json, aggregate.csv,
/// strip_chart.csv and failures.json under `dir`.
void write_study(const std::filesystem::path& dir, const StudyConfig& config, const StudyResult& result);

/// Reads a directory written by write_study.
StudyResult read_study(const std::filesystem::path& dir, StudyConfig* config_out = nullptr);

}  // namespace ghs
