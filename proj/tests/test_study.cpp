#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "ghs/errors.hpp"
#include "ghs/study.hpp"

using namespace ghs;
namespace fs = std::filesystem;

namespace {

StudyConfig small_config() {
  StudyConfig c;
  c.n = {150};
  c.sigma_eps = {0.5, 1.0};
  c.reps = 2;
  c.d_nl = 6;
  c.K = {5};
  c.iters = 300;
  c.burn = 100;
  c.seed = 42;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ghs_study_test_" + name);
  fs::remove_all(p);
  return p;
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char ch : s) n += ch == '\n';
  return n;
}

}  // namespace

TEST_CASE("study results do not depend on the thread count") {
  auto c = small_config();
  const auto a = run_study(c);
  c.threads = 3;
  const auto b = run_study(c);
  REQUIRE(a.replications.size() == 4);
  for (std::size_t i = 0; i < a.replications.size(); ++i)
    CHECK(to_json(a.replications[i]).dump() == to_json(b.replications[i]).dump());
  CHECK(aggregate_csv(a.cells) == aggregate_csv(b.cells));
}

TEST_CASE("task seeds follow the grid coordinates") {
  const auto r = run_study(small_config());
  CHECK(r.replications[0].cell == 0);
  CHECK(r.replications[3].cell == 1);
  CHECK(r.replications[3].rep == 1);
  CHECK(r.replications[3].sigma_eps == 1.0);
  CHECK(r.replications[0].data_seed != r.replications[1].data_seed);
  CHECK(r.replications[0].data_seed != r.replications[0].chain_seed);
  CHECK(r.cells.size() == 2);
  CHECK(r.cells[0].half.three_way.total == 12);
  CHECK(r.cells[0].half.linear_vs_nonlinear.total == 8);
  const auto& t = r.cells[1].half;
  CHECK(t.linear_as_nonlinear + t.zero_as_nonlinear + t.other == t.three_way.errors);
}

TEST_CASE("write and read back a study directory") {
  const auto c = small_config();
  const auto r = run_study(c);
  const fs::path dir = scratch("roundtrip");
  write_study(dir, c, r);
  for (const char* f : {"config.json", "aggregate.csv", "strip_chart.csv", "failures.json"})
    CHECK(fs::exists(dir / f));
  CHECK(fs::exists(dir / "reports" / "cell1_rep1.json"));
  for (const auto& e : fs::recursive_directory_iterator(dir)) CHECK(e.path().extension() != ".tmp");
  CHECK(count_lines(slurp(dir / "aggregate.csv")) == 1 + 2 * 2);
  CHECK(count_lines(slurp(dir / "strip_chart.csv")) == 1 + 4 * 6);
  CHECK(slurp(dir / "failures.json") == "[]\n");

  StudyConfig back;
  const auto rr = read_study(dir, &back);
  CHECK(to_json(back).dump() == to_json(c).dump());
  CHECK(aggregate_csv(rr.cells) == aggregate_csv(r.cells));
  REQUIRE(rr.replications.size() == r.replications.size());
  CHECK(to_json(rr.replications[2]).dump() == to_json(r.replications[2]).dump());
  fs::remove_all(dir);
}

TEST_CASE("failed replications are recorded and the study carries on") {
  auto c = small_config();
  c.K = {200};  // more basis functions than distinct predictor values
  const auto r = run_study(c);
  for (const auto& rep : r.replications) {
    CHECK(rep.failed);
    CHECK(rep.error.find("DegenerateError") == 0);
  }
  CHECK(r.cells[0].failures == 2);
  const fs::path dir = scratch("failures");
  write_study(dir, c, r);
  const auto f = nlohmann::json::parse(slurp(dir / "failures.json"));
  CHECK(f.size() == 4);
  fs::remove_all(dir);
}

TEST_CASE("chain export") {
  auto c = small_config();
  c.n = {150};
  c.sigma_eps = {0.5};
  c.reps = 1;
  c.export_chains = true;
  const fs::path dir = scratch("chains");
  run_study(c, dir);
  const std::string csv = slurp(dir / "cell0_rep0.csv");
  CHECK(count_lines(csv) == 1 + 200);
  const std::string header = csv.substr(0, csv.find('\n'));
  CHECK(header.rfind("iter,beta0,beta_1,", 0) == 0);
  CHECK(header.find("u_6_5,lambda_beta_1") != std::string::npos);
  CHECK(header.find(",sigma_eps") != std::string::npos);
  // 1 + 1 + 6 + 30 + 6 + 6 + 1 + 6 + 1 columns
  int commas = 0;
  for (char ch : header) commas += ch == ',';
  CHECK(commas + 1 == 58);
  fs::remove_all(dir);
}

TEST_CASE("study configuration parsing") {
  const auto j = nlohmann::json::parse(R"({"n": [300], "sigma_eps": [0.25], "reps": 3, "d_nl": 3,
      "truth": ["zero", "linear", "non-linear"], "hyper": {"a_u": 2.5}, "seed": 9})");
  const auto c = study_config_from_json(j);
  CHECK(c.n == std::vector<int>{300});
  CHECK(c.reps == 3);
  CHECK(c.hyper.a_u == 2.5);
  CHECK(c.hyper.a_beta == 1.0);
  CHECK(c.truth[2] == EffectType::NonLinear);
  CHECK_NOTHROW(c.validate());
  CHECK_THROWS_AS(study_config_from_json(nlohmann::json::parse(R"({"reps": "many"})")), ConfigError);
  CHECK_THROWS_AS(study_config_from_json(nlohmann::json::parse(R"({"truth": ["cubic"]})")), ConfigError);
  CHECK_THROWS_AS(study_config_from_json(nlohmann::json::array()), ConfigError);
  StudyConfig bad = small_config();
  bad.burn = 400;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = small_config();
  bad.sigma_eps = {0.0};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK_THROWS_AS(read_study(scratch("missing")), IoError);
}

TEST_CASE("threshold report json keeps missing spline statistics as null") {
  ThresholdReport r;
  r.gamma_beta = {0.8, 0.1};
  r.gamma_u = {std::nan(""), 0.95};
  r.labels = {EffectType::Linear, EffectType::NonLinear};
  r.truth = {EffectType::Linear, EffectType::Zero};
  r.misclassification = Misclassification{1, 2};
  const auto j = to_json(r);
  CHECK(j["gamma_u"][0].is_null());
  CHECK(j["misclassification"]["percent"].get<double>() == 50.0);
  const auto back = threshold_report_from_json(j);
  CHECK(std::isnan(back.gamma_u[0]));
  CHECK(back.gamma_u[1] == 0.95);
  CHECK(back.labels == r.labels);
  CHECK(back.misclassification->errors == 1);
}

TEST_CASE("k-means border does no worse than 1/2 in a low-noise cell") {
  StudyConfig c;
  c.n = {500};
  c.sigma_eps = {0.25};
  c.reps = 2;
  c.d_nl = 12;
  c.iters = 1500;
  c.burn = 500;
  c.seed = 2718;
  const auto r = run_study(c);
  const auto& cell = r.cells[0];
  MESSAGE("half " << cell.half.three_way.errors << " kmeans " << cell.kmeans.three_way.errors);
  CHECK(cell.failures == 0);
  CHECK(cell.kmeans.three_way.errors <= cell.half.three_way.errors);
}
