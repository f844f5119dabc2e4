// Acceptance suite. Each criterion prints one PASS/FAIL line; the exit code is
// nonzero when any selected criterion fails.

#include "cli.hpp"
#include "oracles.hpp"

#include "vrbea/bilevel.hpp"
#include "vrbea/exact_oracle.hpp"
#include "vrbea/graph_stats.hpp"
#include "vrbea/meanfield.hpp"
#include "vrbea/montecarlo.hpp"
#include "vrbea/sampler.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using namespace vrbea;

namespace {

constexpr double kZeta = 1e-6;
constexpr std::uint64_t kSeed = 20240611;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int workers() { return std::max(1u, std::thread::hardware_concurrency()); }

Eigen::VectorXd truth() { return parse_vector("-1,1"); }

ModelSpec full_spec(int n, Rng& rng) {
  ModelSpec spec = ModelSpec::parse("edges,two_stars,triangles,covariate");
  spec.covariate = oracle::random_interior(n, -1.0, 1.0, rng);
  return spec;
}

// ---------------------------------------------------------------- 1

Outcome gradient_suite() {
  Rng rng(kSeed);
  const double eps_grid[] = {0.0, 1e-2, 1.0};
  double worst_mu = 0.0, worst_theta = 0.0, worst_F = 0.0, worst_q = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + trial % 6;
    const ModelSpec spec = trial % 2 ? full_spec(n, rng) : ModelSpec::edge_triangle();
    const Eigen::VectorXd theta = oracle::random_theta(spec.dim(), 2.0, rng);
    const double eps = eps_grid[trial % 3];
    const Eigen::MatrixXd mu = oracle::random_interior(n, 0.05, 0.95, rng);
    const MeanField field(mu, kZeta);
    const MeanField mu_K(oracle::random_interior(n, 0.05, 0.95, rng), kZeta);
    const Graph g = er_init(n, 0.4, rng);
    const double n2 = static_cast<double>(n) * n;

    const auto f_mu = [&](const Eigen::MatrixXd& m) { return f_lower(theta, MeanField(m, kZeta), spec, eps); };
    worst_mu = std::max(worst_mu, oracle::rel_error(grad_f_lower_mu(theta, field, spec, eps),
                                                    oracle::fd_gradient_tied(f_mu, mu)));

    const auto f_theta = [&](const Eigen::VectorXd& t) { return f_lower(t, field, spec, eps); };
    const Eigen::VectorXd g_theta = -evaluate_lower(theta, field, spec, eps, false, false).stats / n2;
    worst_theta = std::max(worst_theta, oracle::rel_error(g_theta, oracle::fd_gradient(f_theta, theta)));

    const auto F = [&](const Eigen::VectorXd& t) { return upper_Fn(t, g, mu_K, spec, eps); };
    worst_F = std::max(worst_F, oracle::rel_error(grad_Fn_theta(theta, g, mu_K, spec), oracle::fd_gradient(F, theta)));

    const JointVector gq = grad_q_hat(theta, field, mu_K, spec, eps);
    const auto q_theta = [&](const Eigen::VectorXd& t) { return q_hat(t, field, mu_K, spec, eps); };
    const auto q_mu = [&](const Eigen::MatrixXd& m) { return q_hat(theta, MeanField(m, kZeta), mu_K, spec, eps); };
    worst_q = std::max({worst_q, oracle::rel_error(gq.theta, oracle::fd_gradient(q_theta, theta)),
                        oracle::rel_error(gq.mu, oracle::fd_gradient_tied(q_mu, mu))});
  }
  const double worst = std::max({worst_mu, worst_theta, worst_F, worst_q});
  return {worst < 1e-6, fmt::format("max relative error: grad_mu f {:.2e}, grad_theta f {:.2e}, grad F {:.2e}, "
                                    "grad q_hat {:.2e} (limit 1e-6)",
                                    worst_mu, worst_theta, worst_F, worst_q)};
}

// ---------------------------------------------------------------- 2

Outcome exact_bound() {
  const ModelSpec spec = ModelSpec::edge_triangle();
  Rng rng(kSeed + 2);
  double worst_excess = -std::numeric_limits<double>::infinity();
  for (int n = 3; n <= 5; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::VectorXd theta = oracle::random_theta(2, 2.0, rng);
      LowerLevelConfig cfg;
      cfg.epsilon = 0.0;
      cfg.K = 2000;
      cfg.alpha = 0.002 * n * n;
      double best = -std::numeric_limits<double>::infinity();
      for (int start = 0; start < 10; ++start) {
        Rng start_rng(derive_seed(kSeed, static_cast<std::uint64_t>(100 * n + trial), static_cast<std::uint64_t>(start)));
        const InnerResult r = inner_loop(theta, random_meanfield(n, kZeta, start_rng), spec, cfg);
        best = std::max(best, gamma_n(theta, r.mu, spec));
      }
      worst_excess = std::max(worst_excess, best - exact_psi(theta, n, spec));
    }
  }
  double worst_closed = 0.0;
  const ModelSpec edges = ModelSpec::parse("edges");
  for (double t = -3.0; t <= 3.0; t += 0.25) {
    Eigen::VectorXd theta(1);
    theta << t;
    worst_closed = std::max(worst_closed, std::abs(exact_psi(theta, 2, edges) - 0.25 * std::log1p(std::exp(2.0 * t))));
  }
  return {worst_excess <= 1e-9 && worst_closed < 1e-12,
          fmt::format("max(psi_MF - psi) = {:.3e} (limit 1e-9); n=2 closed-form error {:.1e} (limit 1e-12)",
                      worst_excess, worst_closed)};
}

// ---------------------------------------------------------------- 3

Outcome sampler_tv() {
  const ModelSpec spec = ModelSpec::edge_triangle();
  const ExactModel exact = ExactModel::build(4, truth(), spec);
  SamplerConfig cfg;
  cfg.burn_in = 1000;
  cfg.thinning = 10;
  cfg.count = 200000;
  cfg.seed = kSeed + 3;
  std::vector<double> freq(exact.prob.size(), 0.0);
  run_sampler(4, truth(), spec, cfg, [&](const Graph& g) { freq[index_of_graph(g)] += 1.0; });
  double tv = 0.0;
  for (std::size_t b = 0; b < freq.size(); ++b) tv += std::abs(freq[b] / cfg.count - exact.prob[b]);
  tv *= 0.5;
  return {tv < 0.02, fmt::format("total variation {:.4f} over {} samples (limit 0.02)", tv, cfg.count)};
}

// ---------------------------------------------------------------- 4

double r_squared(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy * sxy / (sxx * syy);
}

Outcome inner_linear_rate() {
  const ModelSpec spec = ModelSpec::edge_triangle();
  Rng rng(kSeed + 4);
  constexpr int kReference = 3000;
  std::vector<double> fits;
  int tried = 0;
  while (fits.size() < 10 && tried < 100) {
    ++tried;
    const int n = 5 + tried % 10;
    const Eigen::VectorXd theta = oracle::random_theta(2, 1.0, rng);
    LowerLevelConfig cfg;
    cfg.epsilon = 1e-2;
    cfg.alpha = 0.01 * n * n;
    cfg.K = kReference;
    cfg.record_objective = true;
    const MeanField mu0 = random_meanfield(n, kZeta, rng);
    const InnerTrace trace = inner_loop(theta, mu0, spec, cfg).trace;
    const double floor = 1e-11 * std::max(1.0, std::abs(trace.objective.back()));
    const std::vector<double> gaps = trace.gaps();
    std::vector<double> k, log_gap;
    for (std::size_t i = 0; i < gaps.size() && gaps[i] > floor; ++i) {
      k.push_back(static_cast<double>(i));
      log_gap.push_back(std::log(gaps[i]));
    }
    if (k.size() < 10) continue;
    // Strong convexity along the fitted part of the path.
    LowerLevelConfig one = cfg;
    one.K = 1;
    one.record_objective = false;
    MeanField mu = mu0;
    bool convex = true;
    for (std::size_t i = 0; i < k.size() && convex; ++i) {
      convex = min_eig_hessian_estimate(theta, mu, spec, cfg.epsilon) > 0.0;
      mu = inner_loop(theta, mu, spec, one).mu;
    }
    if (convex) fits.push_back(r_squared(k, log_gap));
  }
  const double worst = fits.empty() ? 0.0 : *std::min_element(fits.begin(), fits.end());
  return {fits.size() == 10 && worst > 0.95,
          fmt::format("{} instances with positive curvature along the path ({} drawn); min R^2 {:.4f} (limit 0.95)",
                      fits.size(), tried, worst)};
}

// ---------------------------------------------------------------- 5, 6

McDesign desk_design(std::vector<Estimator> estimators) {
  McDesign d;
  d.n = 50;
  d.truth = truth();
  d.R = 50;
  d.estimators = std::move(estimators);
  d.vrbea.T = 20000;
  d.vrbea.lower.alpha = 0.002 * d.n * d.n;
  d.seed = kSeed;
  d.jobs = workers();
  return d;
}

const ParamSummary& find(const std::vector<ParamSummary>& rows, Estimator e, const std::string& param) {
  for (const ParamSummary& s : rows)
    if (s.estimator == to_string(e) && s.param == param) return s;
  throw std::runtime_error(fmt::format("no summary for {} {}", to_string(e), param));
}

Outcome vrbea_table() {
  const McResult r = run_design(desk_design({Estimator::vrbea}));
  const ParamSummary& e = find(r.summary, Estimator::vrbea, "edges");
  const ParamSummary& t = find(r.summary, Estimator::vrbea, "triangles");
  const bool pass = e.failed == 0 && t.failed == 0 && e.sign_recovery == 100.0 && t.sign_recovery == 100.0 &&
                    e.bias <= 0.05 && t.bias <= 0.05;
  return {pass, fmt::format("sign recovery {:.1f}% / {:.1f}% (need 100); |bias| {:.4f} / {:.4f} (limit 0.05); "
                            "mean ({:.4f}, {:.4f}); failed {} / {}",
                            e.sign_recovery, t.sign_recovery, e.bias, t.bias, e.mean, t.mean, e.failed, t.failed)};
}

Outcome baseline_phenomenology() {
  const McResult r = run_design(desk_design({Estimator::mple, Estimator::mcmc_mle}));
  bool pass = true;
  std::string detail;
  for (Estimator est : {Estimator::mple, Estimator::mcmc_mle}) {
    const ParamSummary& e = find(r.summary, est, "edges");
    const ParamSummary& t = find(r.summary, est, "triangles");
    const bool ok = e.bias <= 0.05 && t.sign_recovery >= 35.0 && t.sign_recovery <= 65.0;
    pass = pass && ok;
    detail += fmt::format("{}: edge |bias| {:.4f} (limit 0.05), triangle sign recovery {:.1f}% (need 35-65); ",
                          to_string(est), e.bias, t.sign_recovery);
  }

  McDesign mz = desk_design({Estimator::mz});
  mz.n = 200;
  const McResult m = run_design(mz);
  int quick = 0;
  std::vector<double> counts;
  for (const ReplicationRecord& rec : m.records) {
    counts.push_back(rec.inner_iterations);
    if (rec.inner_iterations <= 1) ++quick;
  }
  std::sort(counts.begin(), counts.end());
  const double share = 100.0 * quick / static_cast<double>(m.records.size());
  pass = pass && share >= 50.0;
  detail += fmt::format("mz n=200: {:.1f}% of replications with <= 1 inner iteration (need >= 50), median {}",
                        share, counts[counts.size() / 2]);
  return {pass, detail};
}

// ---------------------------------------------------------------- 7

Outcome stationarity_trend() {
  const ModelSpec spec = ModelSpec::edge_triangle();
  SamplerConfig sampler;
  sampler.seed = kSeed + 7;
  const Graph g = metropolis_sample(50, truth(), spec, sampler).front();
  OuterConfig cfg;
  cfg.T = 32000;
  cfg.theta0 = truth();
  cfg.lower.alpha = 0.002 * 50 * 50;
  cfg.seed = kSeed + 7;
  const EstimationResult r = vrbea_estimate(g, spec, cfg);
  std::vector<double> averages;
  double sum = 0.0;
  int t = 0;
  for (int horizon : {2000, 8000, 32000}) {
    for (; t < horizon; ++t) sum += r.trace.rows[t].K_t;
    averages.push_back(sum / horizon);
  }
  const bool pass = averages[0] > averages[1] && averages[1] > averages[2];
  return {pass, fmt::format("running mean of K_t at T = 2000, 8000, 32000: {:.6e}, {:.6e}, {:.6e} "
                            "(strictly decreasing)",
                            averages[0], averages[1], averages[2])};
}

// ---------------------------------------------------------------- 8

Outcome eta_path() {
  McDesign d = desk_design({Estimator::vrbea});
  d.R = 10;
  d.perturbation = 0.5;
  const std::vector<double> grid{0.2, 0.5, 1.0};
  const std::vector<PathRow> rows = sweep_eta(d, grid);
  std::vector<double> F;
  for (double eta : grid)
    for (const PathRow& row : rows)
      if (row.value == eta) {
        F.push_back(row.mean_F);
        break;
      }
  const bool pass = F[0] <= F[1] && F[1] <= F[2];
  return {pass, fmt::format("mean terminal F over {} replications at eta = 0.2, 0.5, 1.0: {:.10f}, {:.10f}, {:.10f} "
                            "(non-decreasing)",
                            d.R, F[0], F[1], F[2])};
}

// ---------------------------------------------------------------- 9

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "vrbea");
  return cli::run(args);
}

std::map<std::string, std::string> directory_contents(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::directory_iterator(dir)) out[entry.path().filename().string()] = slurp(entry.path());
  return out;
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "vrbea_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  const std::string graph = (root / "sample_a" / "graph_0000.csv").string();
  const std::vector<std::pair<std::string, std::vector<std::string>>> commands{
      {"sample", {"sample", "--n", "20", "--theta=-1,1", "--count", "3", "--burn-in", "20000", "--seed", "4"}},
      {"estimate_vrbea", {"estimate", "--graph", graph, "--theta0=-1,1", "--T", "200"}},
      {"estimate_mz", {"estimate", "--method", "mz", "--graph", graph, "--theta0=-1,1", "--mz-starts", "2"}},
      {"estimate_mple", {"estimate", "--method", "mple", "--graph", graph}},
      {"estimate_mcmc", {"estimate", "--method", "mcmc_mle", "--graph", graph, "--theta0=-1,1", "--mcmc-M", "100"}},
      {"mc", {"mc", "--n", "12", "--R", "3", "--T", "40", "--burn-in", "3000", "--estimators", "vrbea,mz,mple,mcmc_mle",
              "--perturb", "0.2", "--jobs", "2", "--seed", "9"}},
      {"sweep_eps", {"sweep", "--n", "10", "--R", "2", "--T", "30", "--burn-in", "2000", "--grid", "eps"}},
      {"sweep_eta", {"sweep", "--n", "10", "--R", "2", "--T", "30", "--burn-in", "2000", "--grid", "eta"}},
      {"exact", {"exact", "--n", "4", "--theta=-1,1"}},
  };
  std::vector<std::string> broken;
  std::size_t files = 0;
  for (const auto& [name, args] : commands) {
    const fs::path first = root / (name + "_a");
    const fs::path second = root / (name + "_b");
    std::vector<std::string> a = args;
    a.insert(a.end(), {"--out", first.string()});
    if (run_cli(a) != 0) {
      broken.push_back(name + " (first run failed)");
      continue;
    }
    const auto manifest = nlohmann::json::parse(slurp(first / "manifest.json"));
    const fs::path config = root / (name + ".toml");
    std::ofstream(config) << manifest.at("config").get<std::string>();
    if (run_cli({args.front(), "--config", config.string(), "--out", second.string()}) != 0) {
      broken.push_back(name + " (re-run failed)");
      continue;
    }
    const auto lhs = directory_contents(first);
    const auto rhs = directory_contents(second);
    files += lhs.size();
    if (lhs != rhs) broken.push_back(name);
  }
  fs::remove_all(root);
  std::string detail =
      fmt::format("{} commands re-run from their manifest config, {} output files compared", commands.size(), files);
  if (!broken.empty()) {
    detail += "; differing:";
    for (const std::string& b : broken) detail += " " + b;
  }
  return {broken.empty(), detail};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::vector<int> selected;
  app.add_option("--criterion,-c", selected, "criteria to run (default: all)")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "gradient suite", gradient_suite},
      {2, "mean-field bound against exact enumeration", exact_bound},
      {3, "sampler distribution on four nodes", sampler_tv},
      {4, "inner-loop linear convergence", inner_linear_rate},
      {5, "vrbea at n=50, R=50, T=20000", vrbea_table},
      {6, "baseline behaviour", baseline_phenomenology},
      {7, "stationarity running mean", stationarity_trend},
      {8, "terminal objective along eta", eta_path},
      {9, "re-run determinism", determinism},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, fmt::format("error: {}", e.what())};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    fmt::print("criterion {} {}: {} ({}; {:.1f} s)\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail, seconds);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
