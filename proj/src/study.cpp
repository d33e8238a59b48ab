#include "ghs/study.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/core.h>

#include "ghs/errors.hpp"
#include "ghs/parallel.hpp"
#include "ghs/random.hpp"

namespace ghs {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  return fmt::format("{:.17g}", v);
}

std::vector<std::string> names(const std::vector<EffectType>& v) {
  std::vector<std::string> out;
  for (auto e : v) out.emplace_back(to_string(e));
  return out;
}

std::vector<EffectType> effects(const json& j) {
  std::vector<EffectType> out;
  for (const auto& s : j) out.push_back(effect_from_string(s.get<std::string>()));
  return out;
}

json nullable(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(std::isnan(x) ? json(nullptr) : json(x));
  return a;
}

std::vector<double> from_nullable(const json& j) {
  std::vector<double> out;
  for (const auto& x : j) out.push_back(x.is_null() ? std::numeric_limits<double>::quiet_NaN() : x.get<double>());
  return out;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot read {}", p.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class T>
void get_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

AdditiveModelSpec StudyConfig::spec_for(int n_obs) const {
  AdditiveModelSpec s;
  s.n = n_obs;
  s.d_lin = d_lin;
  s.d_nl = d_nl;
  s.K = K;
  s.hyper = hyper;
  s.truth = truth.empty() ? thirds_truth(d_lin + d_nl) : truth;
  s.linear_slope = linear_slope;
  s.nonlinear_amplitude = nonlinear_amplitude;
  return s;
}

void StudyConfig::validate() const {
  if (n.empty() || sigma_eps.empty()) throw ConfigError("study grid is empty");
  if (reps < 1) throw ConfigError(fmt::format("reps must be >= 1 (got {})", reps));
  if (threads < 1) throw ConfigError(fmt::format("threads must be >= 1 (got {})", threads));
  if (!(iters > burn) || burn < 0)
    throw ConfigError(fmt::format("need iters > burn >= 0 (got iters={}, burn={})", iters, burn));
  for (double s : sigma_eps)
    if (!(s > 0.0)) throw ConfigError(fmt::format("sigma_eps must be positive (got {})", s));
  for (int v : n) spec_for(v).validate();
}

StudyConfig study_config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("study config must be a JSON object");
  StudyConfig c;
  try {
    get_if(j, "n", c.n);
    get_if(j, "sigma_eps", c.sigma_eps);
    get_if(j, "reps", c.reps);
    get_if(j, "d_lin", c.d_lin);
    get_if(j, "d_nl", c.d_nl);
    get_if(j, "K", c.K);
    if (j.contains("truth")) c.truth = effects(j.at("truth"));
    if (j.contains("hyper")) {
      const auto& h = j.at("hyper");
      get_if(h, "a_beta", c.hyper.a_beta);
      get_if(h, "a_u", c.hyper.a_u);
      get_if(h, "a_eps", c.hyper.a_eps);
    }
    get_if(j, "linear_slope", c.linear_slope);
    get_if(j, "nonlinear_amplitude", c.nonlinear_amplitude);
    get_if(j, "iters", c.iters);
    get_if(j, "burn", c.burn);
    get_if(j, "seed", c.seed);
    get_if(j, "threads", c.threads);
    get_if(j, "export_chains", c.export_chains);
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("bad study config: {}", e.what()));
  }
  return c;
}

json to_json(const StudyConfig& c) {
  return json{{"n", c.n},
              {"sigma_eps", c.sigma_eps},
              {"reps", c.reps},
              {"d_lin", c.d_lin},
              {"d_nl", c.d_nl},
              {"K", c.K},
              {"truth", names(c.truth.empty() ? thirds_truth(c.d_lin + c.d_nl) : c.truth)},
              {"hyper", {{"a_beta", c.hyper.a_beta}, {"a_u", c.hyper.a_u}, {"a_eps", c.hyper.a_eps}}},
              {"linear_slope", c.linear_slope},
              {"nonlinear_amplitude", c.nonlinear_amplitude},
              {"iters", c.iters},
              {"burn", c.burn},
              {"seed", c.seed},
              {"export_chains", c.export_chains}};
}

void ErrorTally::add(const std::vector<EffectType>& labels, const std::vector<EffectType>& truth) {
  const auto m = misclassification_rate(labels, truth);
  three_way.errors += m.errors;
  three_way.total += m.total;
  const auto l = linear_vs_nonlinear_rate(labels, truth);
  linear_vs_nonlinear.errors += l.errors;
  linear_vs_nonlinear.total += l.total;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == truth[i]) continue;
    if (labels[i] == EffectType::NonLinear && truth[i] == EffectType::Linear)
      ++linear_as_nonlinear;
    else if (labels[i] == EffectType::NonLinear && truth[i] == EffectType::Zero)
      ++zero_as_nonlinear;
    else
      ++other;
  }
}

StudyResult run_study(const StudyConfig& config, const fs::path& chain_dir) {
  config.validate();
  const int cells = static_cast<int>(config.n.size() * config.sigma_eps.size());
  StudyResult out;
  out.replications.resize(static_cast<std::size_t>(cells) * config.reps);
  for (int c = 0; c < cells; ++c)
    for (int r = 0; r < config.reps; ++r) {
      Replication& rep = out.replications[c * config.reps + r];
      rep.cell = c;
      rep.rep = r;
      rep.n = config.n[c / config.sigma_eps.size()];
      rep.sigma_eps = config.sigma_eps[c % config.sigma_eps.size()];
      rep.data_seed = derive_seed(config.seed, {static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(r), 0});
      rep.chain_seed = derive_seed(config.seed, {static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(r), 1});
    }
  if (config.export_chains && !chain_dir.empty()) fs::create_directories(chain_dir);

  parallel_for(out.replications.size(), config.threads, [&](std::size_t i) {
    Replication& rep = out.replications[i];
    const AdditiveModelSpec spec = config.spec_for(rep.n);
    try {
      const Dataset data = generate_data(spec, rep.sigma_eps, rep.data_seed);
      const GibbsChain chain = gibbs_sampler(data, spec, config.iters, config.burn, rep.chain_seed);
      if (config.export_chains && !chain_dir.empty())
        write_file_atomic(chain_dir / fmt::format("cell{}_rep{}.csv", rep.cell, rep.rep), chain_csv(chain));
      rep.report = gamma_statistics(chain);
      rep.report.truth = spec.truth;
      rep.report.labels = classify(rep.report, 0.5);
      rep.report.misclassification = misclassification_rate(rep.report.labels, spec.truth);
      std::vector<double> gu;
      for (double g : rep.report.gamma_u)
        if (!std::isnan(g)) gu.push_back(g);
      try {
        rep.kmeans_border_u = kmeans_threshold(gu);
      } catch (const DegenerateError&) {
        rep.kmeans_border_u = 0.5;
      }
      rep.kmeans_labels = classify(rep.report, 0.5, rep.kmeans_border_u);
    } catch (const Error& e) {
      rep.failed = true;
      rep.error = fmt::format("{}: {}", e.kind(), e.what());
    }
  });
  out.cells = summarize(config, out.replications);
  return out;
}

std::vector<CellSummary> summarize(const StudyConfig& config, const std::vector<Replication>& reps) {
  const std::size_t cells = config.n.size() * config.sigma_eps.size();
  std::vector<CellSummary> out(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    out[c].n = config.n[c / config.sigma_eps.size()];
    out[c].sigma_eps = config.sigma_eps[c % config.sigma_eps.size()];
  }
  for (const auto& r : reps) {
    if (r.cell < 0 || static_cast<std::size_t>(r.cell) >= cells)
      throw ConfigError(fmt::format("replication refers to cell {} outside the grid", r.cell));
    CellSummary& s = out[r.cell];
    ++s.reps;
    if (r.failed) {
      ++s.failures;
      continue;
    }
    s.half.add(r.report.labels, r.report.truth);
    s.kmeans.add(r.kmeans_labels, r.report.truth);
  }
  return out;
}

json to_json(const ThresholdReport& r) {
  json j{{"gamma_beta", nullable(r.gamma_beta)},
         {"gamma_u", nullable(r.gamma_u)},
         {"labels", names(r.labels)},
         {"border_beta", r.border_beta},
         {"border_u", r.border_u},
         {"truth", names(r.truth)}};
  if (r.misclassification)
    j["misclassification"] = {{"errors", r.misclassification->errors},
                              {"total", r.misclassification->total},
                              {"percent", r.misclassification->percent()}};
  else
    j["misclassification"] = nullptr;
  return j;
}

ThresholdReport threshold_report_from_json(const json& j) {
  ThresholdReport r;
  try {
    r.gamma_beta = from_nullable(j.at("gamma_beta"));
    r.gamma_u = from_nullable(j.at("gamma_u"));
    r.labels = effects(j.at("labels"));
    r.border_beta = j.at("border_beta").get<double>();
    r.border_u = j.at("border_u").get<double>();
    r.truth = effects(j.at("truth"));
    const auto& m = j.at("misclassification");
    if (!m.is_null()) r.misclassification = Misclassification{m.at("errors").get<long>(), m.at("total").get<long>()};
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("bad threshold report: {}", e.what()));
  }
  return r;
}

json to_json(const Replication& r) {
  json j{{"cell", r.cell},
         {"rep", r.rep},
         {"n", r.n},
         {"sigma_eps", r.sigma_eps},
         {"data_seed", r.data_seed},
         {"chain_seed", r.chain_seed},
         {"failed", r.failed}};
  if (r.failed) {
    j["error"] = r.error;
    return j;
  }
  j["report"] = to_json(r.report);
  j["kmeans_border_u"] = r.kmeans_border_u;
  j["kmeans_labels"] = names(r.kmeans_labels);
  return j;
}

Replication replication_from_json(const json& j) {
  Replication r;
  try {
    r.cell = j.at("cell").get<int>();
    r.rep = j.at("rep").get<int>();
    r.n = j.at("n").get<int>();
    r.sigma_eps = j.at("sigma_eps").get<double>();
    r.data_seed = j.at("data_seed").get<std::uint64_t>();
    r.chain_seed = j.at("chain_seed").get<std::uint64_t>();
    r.failed = j.at("failed").get<bool>();
    if (r.failed) {
      r.error = j.value("error", "");
      return r;
    }
    r.report = threshold_report_from_json(j.at("report"));
    r.kmeans_border_u = j.at("kmeans_border_u").get<double>();
    r.kmeans_labels = effects(j.at("kmeans_labels"));
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("bad replication record: {}", e.what()));
  }
  return r;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot write {}", tmp.string()));
    out << content;
    out.flush();
    if (!out) throw IoError(fmt::format("write failed for {}", tmp.string()));
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError(fmt::format("cannot move {} into place: {}", path.string(), ec.message()));
}

std::string chain_csv(const GibbsChain& ch) {
  std::string s = "iter,beta0";
  const int p = static_cast<int>(ch.beta.cols());
  for (int j = 0; j < p; ++j) s += fmt::format(",beta_{}", j + 1);
  for (std::size_t b = 0; b < ch.block_size.size(); ++b)
    for (int k = 0; k < ch.block_size[b]; ++k) s += fmt::format(",u_{}_{}", ch.block_predictor[b] + 1, k + 1);
  for (int j = 0; j < p; ++j) s += fmt::format(",lambda_beta_{}", j + 1);
  for (int pred : ch.block_predictor) s += fmt::format(",lambda_u_{}", pred + 1);
  s += ",sigma_beta";
  for (int pred : ch.block_predictor) s += fmt::format(",sigma_u_{}", pred + 1);
  s += ",sigma_eps\n";
  for (int t = 0; t < ch.draws(); ++t) {
    s += fmt::format("{},{}", ch.burn + t + 1, num(ch.beta0[t]));
    for (int j = 0; j < p; ++j) s += "," + num(ch.beta(t, j));
    for (Eigen::Index k = 0; k < ch.u.cols(); ++k) s += "," + num(ch.u(t, k));
    for (int j = 0; j < p; ++j) s += "," + num(ch.lambda_beta(t, j));
    for (Eigen::Index b = 0; b < ch.lambda_u.cols(); ++b) s += "," + num(ch.lambda_u(t, b));
    s += "," + num(ch.sigma_beta[t]);
    for (Eigen::Index b = 0; b < ch.sigma_u.cols(); ++b) s += "," + num(ch.sigma_u(t, b));
    s += "," + num(ch.sigma_eps[t]) + "\n";
  }
  return s;
}

std::string aggregate_csv(const std::vector<CellSummary>& cells) {
  std::string s =
      "n,sigma_eps,method,reps,failures,errors,total,percent,lvn_errors,lvn_total,lvn_percent,"
      "linear_as_nonlinear,zero_as_nonlinear,other_errors\n";
  for (const auto& c : cells)
    for (const auto* m : {"half", "kmeans"}) {
      const ErrorTally& t = std::string(m) == "half" ? c.half : c.kmeans;
      s += fmt::format("{},{},{},{},{},{},{},{:.4f},{},{},{:.4f},{},{},{}\n", c.n, num(c.sigma_eps), m, c.reps,
                       c.failures, t.three_way.errors, t.three_way.total, t.three_way.percent(),
                       t.linear_vs_nonlinear.errors, t.linear_vs_nonlinear.total,
                       t.linear_vs_nonlinear.percent(), t.linear_as_nonlinear, t.zero_as_nonlinear, t.other);
    }
  return s;
}

std::string strip_chart_csv(const std::vector<Replication>& reps) {
  std::string s = "n,sigma_eps,rep,predictor,truth,gamma_beta,gamma_u,label_half,label_kmeans\n";
  for (const auto& r : reps) {
    if (r.failed) continue;
    for (std::size_t j = 0; j < r.report.gamma_beta.size(); ++j)
      s += fmt::format("{},{},{},{},{},{},{},{},{}\n", r.n, num(r.sigma_eps), r.rep, j + 1,
                       to_string(r.report.truth[j]), num(r.report.gamma_beta[j]), num(r.report.gamma_u[j]),
                       to_string(r.report.labels[j]), to_string(r.kmeans_labels[j]));
  }
  return s;
}

void write_study(const fs::path& dir, const StudyConfig& config, const StudyResult& result) {
  fs::create_directories(dir / "reports");
  write_file_atomic(dir / "config.json", to_json(config).dump(2) + "\n");
  json failures = json::array();
  for (const auto& r : result.replications) {
    write_file_atomic(dir / "reports" / fmt::format("cell{}_rep{}.json", r.cell, r.rep), to_json(r).dump(2) + "\n");
    if (r.failed) failures.push_back({{"cell", r.cell}, {"rep", r.rep}, {"error", r.error}});
  }
  write_file_atomic(dir / "aggregate.csv", aggregate_csv(result.cells));
  write_file_atomic(dir / "strip_chart.csv", strip_chart_csv(result.replications));
  write_file_atomic(dir / "failures.json", failures.dump(2) + "\n");
}

StudyResult read_study(const fs::path& dir, StudyConfig* config_out) {
  json cj;
  try {
    cj = json::parse(read_file(dir / "config.json"));
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("bad config.json: {}", e.what()));
  }
  const StudyConfig config = study_config_from_json(cj);
  StudyResult out;
  const int cells = static_cast<int>(config.n.size() * config.sigma_eps.size());
  for (int c = 0; c < cells; ++c)
    for (int r = 0; r < config.reps; ++r) {
      const fs::path p = dir / "reports" / fmt::format("cell{}_rep{}.json", c, r);
      if (!fs::exists(p)) continue;
      try {
        out.replications.push_back(replication_from_json(json::parse(read_file(p))));
      } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("bad report {}: {}", p.string(), e.what()));
      }
    }
  out.cells = summarize(config, out.replications);
  if (config_out) *config_out = config;
  return out;
}

}  // namespace ghs
