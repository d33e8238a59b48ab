// Command-line front end: density, sample, risk, simulate, report.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "ghs/distribution.hpp"
#include "ghs/errors.hpp"
#include "ghs/risk.hpp"
#include "ghs/study.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "csv";
  int threads = 1;
  std::string config_path;
  json config = json::object();
};

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return fmt::format("{:.17g}", v);
}

// Flag value when given on the command line, otherwise the config field,
// otherwise the default already in `value`.
template <class T>
void resolve(const CLI::App& cmd, const char* flag, const json& cfg, const char* key, T& value) {
  if (cmd.count(flag) > 0) return;
  if (!cfg.contains(key)) return;
  try {
    value = cfg.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ghs::ConfigError(fmt::format("config field '{}': {}", key, e.what()));
  }
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (tok.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(tok);
    } catch (const std::logic_error&) {
      throw ghs::ConfigError(fmt::format("'{}' is not a number", tok));
    }
  }
  return out;
}

void emit(const Globals& g, const std::string& content) {
  if (g.out.empty() || g.out == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  ghs::write_file_atomic(g.out, content);
}

std::uint64_t require_seed(const Globals& g, const char* command) {
  if (!g.seed) throw ghs::ConfigError(fmt::format("{} needs --seed (or \"seed\" in the config)", command));
  return *g.seed;
}

// ---------------------------------------------------------------- density

std::vector<std::vector<double>> read_points(const std::string& path, int d) {
  std::ifstream in(path);
  if (!in) throw ghs::IoError(fmt::format("cannot read points file {}", path));
  std::vector<std::vector<double>> pts;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    for (char& ch : line)
      if (ch == ' ' || ch == '\t' || ch == ';') ch = ',';
    std::vector<double> p;
    try {
      p = parse_list(line);
    } catch (const ghs::ConfigError&) {
      if (pts.empty() && lineno == 1) continue;  // header row
      throw ghs::IoError(fmt::format("{}:{}: not a numeric row", path, lineno));
    }
    if (static_cast<int>(p.size()) != d)
      throw ghs::DimensionError(fmt::format("{}:{}: {} coordinates, expected {}", path, lineno, p.size(), d));
    pts.push_back(std::move(p));
  }
  return pts;
}

std::vector<std::vector<double>> grid_points(const std::string& spec, int d) {
  const auto v = parse_list(spec);
  if (v.size() != 3 || !(v[2] > 0.0) || !(v[1] >= v[0]))
    throw ghs::ConfigError(fmt::format("grid must be lo,hi,step with hi >= lo and step > 0 (got '{}')", spec));
  const long m = std::lround(std::floor((v[1] - v[0]) / v[2] + 1e-9)) + 1;
  const double rows = std::pow(static_cast<double>(m), d);
  if (rows > 5e6) throw ghs::ConfigError(fmt::format("grid would have {:.0f} rows (limit 5e6)", rows));
  std::vector<std::vector<double>> pts;
  std::vector<long> idx(d, 0);
  for (long r = 0; r < static_cast<long>(rows); ++r) {
    std::vector<double> p(d);
    for (int k = 0; k < d; ++k) p[k] = v[0] + idx[k] * v[2];
    pts.push_back(std::move(p));
    for (int k = d - 1; k >= 0; --k) {
      if (++idx[k] < m) break;
      idx[k] = 0;
    }
  }
  return pts;
}

void run_density(const Globals& g, int d, double sigma, const std::string& grid,
                 const std::string& points, const std::vector<std::string>& point) {
  ghs::GhsDistribution dist{d, sigma};
  dist.validate();
  std::vector<std::vector<double>> pts;
  int sources = !grid.empty() + !points.empty() + !point.empty();
  if (sources != 1) throw ghs::ConfigError("give exactly one of --grid, --points, --point");
  if (!grid.empty()) pts = grid_points(grid, d);
  if (!points.empty()) pts = read_points(points, d);
  for (const auto& s : point) {
    auto p = parse_list(s);
    if (static_cast<int>(p.size()) != d)
      throw ghs::DimensionError(fmt::format("point '{}' has {} coordinates, expected {}", s, p.size(), d));
    pts.push_back(std::move(p));
  }
  std::string out;
  if (g.format == "json") {
    json rows = json::array();
    for (const auto& p : pts) {
      const double ld = ghs::log_density(dist, p);
      json r{{"x", p}};
      if (std::isinf(ld)) {
        r["density"] = nullptr;
        r["log_density"] = nullptr;
        r["pole"] = true;
      } else {
        r["density"] = std::exp(ld);
        r["log_density"] = ld;
        r["pole"] = false;
      }
      rows.push_back(std::move(r));
    }
    out = json{{"d", d}, {"sigma", sigma}, {"rows", rows}}.dump(2) + "\n";
  } else {
    for (int k = 0; k < d; ++k) out += fmt::format("x{},", k + 1);
    out += "density,log_density\n";
    for (const auto& p : pts) {
      const double ld = ghs::log_density(dist, p);
      for (double v : p) out += num(v) + ",";
      out += num(std::exp(ld)) + "," + num(ld) + "\n";
    }
  }
  emit(g, out);
}

// ----------------------------------------------------------------- sample

void run_sample(const Globals& g, int d, double sigma, long long n) {
  if (n < 1) throw ghs::ConfigError(fmt::format("--n must be >= 1 (got {})", n));
  ghs::GhsDistribution dist{d, sigma};
  dist.validate();
  const auto draws = ghs::sample(dist, static_cast<std::size_t>(n), require_seed(g, "sample"));
  std::string out;
  if (g.format == "json") {
    json rows = json::array();
    for (const auto& dr : draws) rows.push_back({{"lambda", dr.lambda}, {"x", dr.x}});
    out = json{{"d", d}, {"sigma", sigma}, {"seed", *g.seed}, {"draws", rows}}.dump(2) + "\n";
  } else {
    out = "lambda";
    for (int k = 0; k < d; ++k) out += fmt::format(",x{}", k + 1);
    out += "\n";
    for (const auto& dr : draws) {
      out += num(dr.lambda);
      for (double v : dr.x) out += "," + num(v);
      out += "\n";
    }
  }
  emit(g, out);
}

// ------------------------------------------------------------------- risk

std::vector<long long> n_grid(const std::string& list, const std::string& range) {
  std::vector<long long> ns;
  if (!list.empty() && !range.empty()) throw ghs::ConfigError("give --n or --log10-n-range, not both");
  if (!list.empty())
    for (double v : parse_list(list)) ns.push_back(std::llround(v));
  if (!range.empty()) {
    const auto v = parse_list(range);
    if (v.size() != 3 || !(v[2] > 0.0) || !(v[1] >= v[0]))
      throw ghs::ConfigError(fmt::format("log10 range must be lo,hi,step (got '{}')", range));
    for (double e = v[0]; e <= v[1] + 1e-9; e += v[2]) ns.push_back(std::llround(std::pow(10.0, e)));
  }
  if (ns.empty()) throw ghs::ConfigError("risk needs --n or --log10-n-range");
  for (long long n : ns)
    if (n < 1) throw ghs::ConfigError(fmt::format("sample sizes must be >= 1 (got {})", n));
  return ns;
}

void run_risk(const Globals& g, const std::vector<int>& ds, double sigma, const std::string& theta0,
              const std::vector<long long>& ns) {
  std::vector<double> t0;
  if (!theta0.empty()) t0 = parse_list(theta0);
  json rows = json::array();
  std::string csv = "d,n,mass,mass_upper,bound,normalized_bound\n";
  for (int d : ds) {
    ghs::RiskScenario sc;
    sc.d = d;
    sc.sigma = sigma;
    sc.theta0 = t0;
    sc.validate();
    for (long long n : ns) {
      const auto mass = ghs::kl_ball_prior_mass(sc, n);
      const double bound = ghs::risk_upper_bound(sc, n);
      const double normalized = static_cast<double>(n) * bound;
      csv += fmt::format("{},{},{},{},{},{}\n", d, n, num(mass.lower), num(mass.upper), num(bound), num(normalized));
      rows.push_back({{"d", d},
                      {"n", n},
                      {"mass", mass.lower},
                      {"mass_upper", mass.upper},
                      {"exact", mass.exact},
                      {"bound", bound},
                      {"normalized_bound", normalized}});
    }
  }
  if (g.format == "json")
    emit(g, json{{"sigma", sigma}, {"theta0", t0}, {"rows", rows}}.dump(2) + "\n");
  else
    emit(g, csv);
}

// --------------------------------------------------------------- simulate

json summary_json(const std::vector<ghs::CellSummary>& cells) {
  json out = json::array();
  for (const auto& c : cells) {
    json cell{{"n", c.n}, {"sigma_eps", c.sigma_eps}, {"reps", c.reps}, {"failures", c.failures}};
    for (const auto& [name, t] : {std::pair{"half", &c.half}, std::pair{"kmeans", &c.kmeans}})
      cell[name] = {{"errors", t->three_way.errors},
                    {"total", t->three_way.total},
                    {"percent", t->three_way.percent()},
                    {"lvn_errors", t->linear_vs_nonlinear.errors},
                    {"lvn_total", t->linear_vs_nonlinear.total},
                    {"lvn_percent", t->linear_vs_nonlinear.percent()},
                    {"linear_as_nonlinear", t->linear_as_nonlinear},
                    {"zero_as_nonlinear", t->zero_as_nonlinear}};
    out.push_back(std::move(cell));
  }
  return out;
}

void run_simulate(Globals& g, const CLI::App& cmd, const std::vector<int>& n, const std::vector<double>& sig,
                  int reps, int iters, int burn, bool export_chains) {
  ghs::StudyConfig c = ghs::study_config_from_json(g.config);
  if (cmd.count("--n")) c.n = n;
  if (cmd.count("--sigma-eps")) c.sigma_eps = sig;
  if (cmd.count("--reps")) c.reps = reps;
  if (cmd.count("--iters")) c.iters = iters;
  if (cmd.count("--burn")) c.burn = burn;
  if (cmd.count("--export-chains")) c.export_chains = export_chains;
  c.seed = require_seed(g, "simulate");
  c.threads = g.threads;
  c.validate();
  if (g.out.empty() || g.out == "-") throw ghs::ConfigError("simulate needs --out <directory>");
  for (int nn : c.n)
    for (const auto& w : c.spec_for(nn).warnings()) fmt::print(stderr, "warning: {}\n", w);
  const fs::path dir(g.out);
  const auto result = ghs::run_study(c, dir / "chains");
  ghs::write_study(dir, c, result);
  if (g.format == "json")
    std::cout << json{{"out", g.out}, {"cells", summary_json(result.cells)}}.dump(2) << "\n";
  else
    std::cout << ghs::aggregate_csv(result.cells);
}

void run_report(const Globals& g, const std::string& in) {
  if (in.empty()) throw ghs::ConfigError("report needs --in <study directory>");
  ghs::StudyConfig c;
  const auto result = ghs::read_study(in, &c);
  if (g.format == "json")
    emit(g, json{{"config", ghs::to_json(c)}, {"cells", summary_json(result.cells)}}.dump(2) + "\n");
  else
    emit(g, ghs::aggregate_csv(result.cells));
}

void error_out(const char* kind, const std::string& message) {
  std::cerr << json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grouped Horseshoe density, risk and variable-selection tools"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  std::uint64_t seed_flag = 0;
  app.add_option("--seed", seed_flag, "Master seed for stochastic commands");
  app.add_option("--out", g.out, "Output file (directory for simulate); stdout when omitted");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--config", g.config_path, "JSON config; flags override its fields");

  int d = 1;
  double sigma = 1.0;
  std::string grid, points;
  std::vector<std::string> point;
  auto* density = app.add_subcommand("density", "Evaluate the density on a grid or at points");
  density->add_option("--d", d, "Dimension");
  density->add_option("--sigma", sigma, "Scale sigma_theta");
  density->add_option("--grid", grid, "lo,hi,step applied to every coordinate");
  density->add_option("--points", points, "File with one point per line");
  density->add_option("--point", point, "A single point x1,...,xd (repeatable)");

  long long n_draws = 1000;
  auto* samp = app.add_subcommand("sample", "Draw from the distribution");
  samp->add_option("--d", d, "Dimension");
  samp->add_option("--sigma", sigma, "Scale sigma_theta");
  samp->add_option("--n", n_draws, "Number of draws");

  std::string d_list = "1", theta0, n_list, n_range;
  auto* risk = app.add_subcommand("risk", "Prior masses and risk upper bounds over an n grid");
  risk->add_option("--d", d_list, "Dimensions, comma separated");
  risk->add_option("--sigma", sigma, "Prior scale");
  risk->add_option("--theta0", theta0, "Data-generating parameter, comma separated (default origin)");
  risk->add_option("--n", n_list, "Sample sizes, comma separated");
  risk->add_option("--log10-n-range", n_range, "lo,hi,step in log10 n");

  std::vector<int> sim_n;
  std::vector<double> sim_sigma;
  int reps = 6, iters = 6000, burn = 1000;
  bool export_chains = false;
  auto* sim = app.add_subcommand("simulate", "Run the variable-selection simulation study");
  sim->add_option("--n", sim_n, "Sample sizes")->delimiter(',');
  sim->add_option("--sigma-eps", sim_sigma, "Noise levels")->delimiter(',');
  sim->add_option("--reps", reps, "Replications per cell");
  sim->add_option("--iters", iters, "Gibbs iterations including burn-in");
  sim->add_option("--burn", burn, "Burn-in iterations");
  sim->add_flag("--export-chains", export_chains, "Write chain CSVs under <out>/chains");

  std::string in_dir;
  auto* report = app.add_subcommand("report", "Summarize a simulation output directory");
  report->add_option("--in", in_dir, "Directory written by simulate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    error_out("UsageError", e.what());
    return 2;
  }

  try {
    if (!g.config_path.empty()) {
      std::ifstream in(g.config_path);
      if (!in) throw ghs::IoError(fmt::format("cannot read config {}", g.config_path));
      try {
        g.config = json::parse(in);
      } catch (const json::parse_error& e) {
        throw ghs::ConfigError(fmt::format("config {} is not valid JSON: {}", g.config_path, e.what()));
      }
      if (!g.config.is_object()) throw ghs::ConfigError("config must be a JSON object");
    }
    const json& cfg = g.config;
    if (app.count("--seed"))
      g.seed = seed_flag;
    else if (cfg.contains("seed"))
      g.seed = cfg.at("seed").get<std::uint64_t>();
    resolve(app, "--out", cfg, "out", g.out);
    resolve(app, "--format", cfg, "format", g.format);
    resolve(app, "--threads", cfg, "threads", g.threads);
    if (g.format != "csv" && g.format != "json")
      throw ghs::ConfigError(fmt::format("format must be csv or json (got '{}')", g.format));
    if (g.threads < 1) throw ghs::ConfigError("threads must be >= 1");

    if (*density) {
      resolve(*density, "--d", cfg, "d", d);
      resolve(*density, "--sigma", cfg, "sigma", sigma);
      resolve(*density, "--grid", cfg, "grid", grid);
      resolve(*density, "--points", cfg, "points", points);
      run_density(g, d, sigma, grid, points, point);
    } else if (*samp) {
      resolve(*samp, "--d", cfg, "d", d);
      resolve(*samp, "--sigma", cfg, "sigma", sigma);
      resolve(*samp, "--n", cfg, "n", n_draws);
      run_sample(g, d, sigma, n_draws);
    } else if (*risk) {
      resolve(*risk, "--d", cfg, "d", d_list);
      resolve(*risk, "--sigma", cfg, "sigma", sigma);
      resolve(*risk, "--theta0", cfg, "theta0", theta0);
      resolve(*risk, "--n", cfg, "n", n_list);
      resolve(*risk, "--log10-n-range", cfg, "log10_n_range", n_range);
      std::vector<int> ds;
      for (double v : parse_list(d_list)) ds.push_back(static_cast<int>(std::lround(v)));
      run_risk(g, ds, sigma, theta0, n_grid(n_list, n_range));
    } else if (*sim) {
      run_simulate(g, *sim, sim_n, sim_sigma, reps, iters, burn, export_chains);
    } else if (*report) {
      resolve(*report, "--in", cfg, "in", in_dir);
      run_report(g, in_dir);
    }
  } catch (const ghs::Error& e) {
    error_out(e.kind(), e.what());
    return 1;
  } catch (const json::exception& e) {
    error_out("ConfigError", e.what());
    return 1;
  } catch (const std::exception& e) {
    error_out("InternalError", e.what());
    return 3;
  }
  return 0;
}
