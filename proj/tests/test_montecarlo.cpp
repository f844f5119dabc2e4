#include "vrbea/errors.hpp"
#include "vrbea/montecarlo.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace vrbea;

namespace {

McDesign tiny_design() {
  McDesign d;
  d.n = 12;
  d.truth = parse_vector("-1,1");
  d.R = 3;
  d.estimators = {Estimator::vrbea, Estimator::mple};
  d.sampler.burn_in = 5000;
  d.vrbea.T = 20;
  d.vrbea.lower.alpha = 0.002 * 144;
  d.seed = 42;
  return d;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("summarize examples") {
  const ParamSummary exact = summarize({-1.0, -1.0, -1.0}, -1.0);
  CHECK(exact.bias == 0.0);
  CHECK(exact.mad == 0.0);
  CHECK(exact.sign_recovery == 100.0);
  const ParamSummary two = summarize({-2.0, 0.0}, -1.0);
  CHECK(two.mean == -1.0);
  CHECK(two.bias == 0.0);
  CHECK(two.mad == 1.0);
  CHECK(two.sign_recovery == 50.0);
  CHECK(two.se == doctest::Approx(std::sqrt(2.0)));
  const ParamSummary single = summarize({0.3}, 1.0);
  CHECK(single.mean == 0.3);
  CHECK(single.se == 0.0);
  CHECK(single.mad == doctest::Approx(0.7));
  const ParamSummary out = summarize({1.0, 1500.0, 2.0}, 1.0);
  CHECK(out.outliers == 1);
  CHECK(out.trimmed_mean == 1.5);
  CHECK(out.mean == doctest::Approx(501.0));
  const ParamSummary q = summarize({1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}, 6.0);
  CHECK(q.median == 6.0);
  CHECK(q.q05 == doctest::Approx(1.5));
  CHECK(q.q95 == doctest::Approx(10.5));
  CHECK_THROWS_AS(summarize({}, 0.0), ConfigError);
}

TEST_CASE("estimator names") {
  CHECK(parse_estimators("vrbea, mz,mple,mcmc_mle").size() == 4);
  CHECK(parse_estimators("").empty());
  CHECK_THROWS_AS(parse_estimators("vrbea,vrbea"), ConfigError);
  CHECK_THROWS_AS(parse_estimator("mle"), ConfigError);
  for (Estimator e : {Estimator::vrbea, Estimator::mz, Estimator::mple, Estimator::mcmc_mle})
    CHECK(parse_estimator(to_string(e)) == e);
}

TEST_CASE("design validation") {
  McDesign d = tiny_design();
  CHECK_NOTHROW(d.validate());
  d.R = 0;
  CHECK_THROWS_AS(d.validate(), ConfigError);
  d = tiny_design();
  d.estimators.clear();
  CHECK_THROWS_AS(d.validate(), ConfigError);
  d = tiny_design();
  d.perturbation = -0.1;
  CHECK_THROWS_AS(d.validate(), ConfigError);
}

TEST_CASE("run design is reproducible and independent of scheduling") {
  const McDesign d = tiny_design();
  const McResult a = run_design(d);
  McDesign threaded = d;
  threaded.jobs = 3;
  const McResult b = run_design(threaded);
  REQUIRE(a.records.size() == 6);
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    CHECK(a.records[k].rep == b.records[k].rep);
    CHECK(a.records[k].theta_hat == b.records[k].theta_hat);
  }
  CHECK(a.records[0].rep == 0);
  CHECK(a.records[0].estimator == Estimator::vrbea);
  CHECK(a.records[1].estimator == Estimator::mple);
  CHECK(a.summary.size() == 4);

  // Growing R leaves the existing replications untouched.
  McDesign more = d;
  more.R = 4;
  const McResult c = run_design(more);
  for (std::size_t k = 0; k < a.records.size(); ++k) CHECK(c.records[k].theta_hat == a.records[k].theta_hat);
}

TEST_CASE("perturbed initial values are shared across estimators") {
  McDesign d = tiny_design();
  d.perturbation = 0.5;
  const McResult r = run_design(d);
  CHECK(r.records[0].theta0 == r.records[1].theta0);
  CHECK(r.records[0].theta0 != r.records[2].theta0);
  CHECK((r.records[0].theta0 - d.truth).cwiseAbs().maxCoeff() <= 0.5);
}

TEST_CASE("summary round-trips through the replication csv") {
  const McDesign d = tiny_design();
  const McResult r = run_design(d);
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / "vrbea_mc_roundtrip";
  std::filesystem::create_directories(dir);
  write_replications_csv(dir / "replications.csv", d, r.records);
  write_summary_csv(dir / "summary.csv", r.summary);
  write_histograms(dir, d, r.records, 5);

  std::ifstream in(dir / "replications.csv");
  std::string line;
  std::getline(in, line);
  const std::vector<std::string> header = split(line);
  CHECK(header[6] == "theta_hat_1");
  std::vector<double> edges_vrbea;
  while (std::getline(in, line)) {
    const std::vector<std::string> cells = split(line);
    if (cells[1] == "vrbea") edges_vrbea.push_back(std::stod(cells[6]));
  }
  const ParamSummary again = summarize(edges_vrbea, -1.0);
  CHECK(again.mean == r.summary[0].mean);
  CHECK(again.se == r.summary[0].se);
  CHECK(again.mad == r.summary[0].mad);

  const std::string hist = slurp(dir / "hist_edges.csv");
  CHECK(hist.rfind("estimator,bin,lo,hi,count\n", 0) == 0);
  int total = 0;
  std::istringstream hs(hist);
  std::getline(hs, line);
  while (std::getline(hs, line)) total += std::stoi(split(line)[4]);
  CHECK(total == 6);
  CHECK(slurp(dir / "summary.csv").rfind("estimator,param,truth,count,failed,bias,mean,median,MAD,se", 0) == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("sweeps") {
  McDesign d = tiny_design();
  d.R = 2;
  const std::vector<PathRow> one = sweep_regularization(d, {0.01});
  CHECK(one.size() == 2);
  const std::vector<PathRow> eps = sweep_regularization(d, {0.0, 1e-4, 1e-2, 1.0});
  CHECK(eps.size() == 8);
  CHECK(eps[0].value == 0.0);
  CHECK(eps[0].param == "edges");
  CHECK(eps[1].param == "triangles");
  const std::vector<PathRow> eta = sweep_eta(d, {0.2, 1.0});
  CHECK(eta.size() == 4);
  CHECK(std::isfinite(eta[0].mean_F));
  CHECK_THROWS_AS(sweep_eta(d, {}), ConfigError);
}

TEST_CASE("column documentation covers every file") {
  const nlohmann::ordered_json cols = output_columns();
  for (const char* f : {"summary.csv", "replications.csv", "path_eps.csv", "path_eta.csv", "hist_<param>.csv"})
    CHECK(cols.contains(f));
  CHECK(cols["path_eta.csv"].contains("eta"));
  CHECK_FALSE(cols["path_eta.csv"].contains("eps"));
  CHECK(cols["summary.csv"].size() == 17);
}
