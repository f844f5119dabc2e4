#include "cli.hpp"

#include "vrbea/baselines.hpp"
#include "vrbea/bilevel.hpp"
#include "vrbea/errors.hpp"
#include "vrbea/exact_oracle.hpp"
#include "vrbea/graph_io.hpp"
#include "vrbea/graph_stats.hpp"
#include "vrbea/montecarlo.hpp"
#include "vrbea/sampler.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace vrbea::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Common {
  std::string out;
  std::uint64_t seed = 0;
  std::string spec = "edges,triangles";
  std::string covariate;
  int jobs = 1;
};

struct EstimatorOptions {
  OuterConfig vrbea;
  std::string alpha = "auto";
  std::string mu_base = "inner";
  MzConfig mz;
  MpleConfig mple;
  McmcMleConfig mcmc;
};

void add_common(CLI::App* app, Common& c, bool with_jobs) {
  app->add_option("--out", c.out, fmt::format("Output directory (default ${} or ./vrbea_out)", kOutDirEnv))
      ->configurable(false);
  app->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  app->add_option("--spec", c.spec, "Comma separated statistics")->capture_default_str();
  app->add_option("--covariate", c.covariate, "Adjacency-style CSV of the dyadic covariate");
  if (with_jobs) app->add_option("--jobs", c.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
}

void add_sampler(CLI::App* app, SamplerConfig& s) {
  app->add_option("--burn-in", s.burn_in, "Toggles before the first sample (-1: 1e5 n)")->capture_default_str();
  app->add_option("--thinning", s.thinning, "Toggles between samples (-1: 10 n)")->capture_default_str();
  app->add_option("--init-p", s.init_p, "Initial edge density (-1: sigmoid(theta_1))")->capture_default_str();
  app->add_flag("--gibbs", s.gibbs, "Heat-bath dyad updates");
}

void add_estimators(CLI::App* app, EstimatorOptions& e) {
  OuterConfig& v = e.vrbea;
  app->add_option("--eps", v.lower.epsilon, "Lower-level regularization")->capture_default_str();
  app->add_option("--eta", v.eta, "Barrier speed")->capture_default_str();
  app->add_option("--xi", v.xi, "Outer step size")->capture_default_str();
  app->add_option("--K", v.lower.K, "Inner steps per outer step")->capture_default_str();
  app->add_option("--T", v.T, "Outer steps")->capture_default_str();
  app->add_option("--alpha", e.alpha, "Inner step size, or 'auto' for 0.002 n^2")->capture_default_str();
  app->add_option("--zeta", v.lower.zeta, "Mean-field box margin")->capture_default_str();
  app->add_option("--gamma", v.gamma, "Weight of q_hat in the logged energy")->capture_default_str();
  app->add_flag("--inv-sqrt-step", v.inv_sqrt_step, "Use xi = 1/sqrt(T)");
  app->add_option("--mu-base", e.mu_base, "Joint step base for mu: inner or tracked")->capture_default_str();

  app->add_option("--mz-tol", e.mz.eps_tol, "Mele-Zhu inner stopping threshold")->capture_default_str();
  app->add_option("--mz-starts", e.mz.K_starts, "Mele-Zhu multi-starts")->capture_default_str();
  app->add_flag("--mz-abs-diff", e.mz.abs_diff, "Mele-Zhu stops on |diff|");
  app->add_option("--mz-inner-max", e.mz.inner_max_iter, "Mele-Zhu inner iteration cap")->capture_default_str();
  app->add_option("--mz-outer-max", e.mz.outer_max_iter, "Mele-Zhu BFGS iteration cap")->capture_default_str();
  app->add_option("--mz-outer-tol", e.mz.outer_tol, "Mele-Zhu gradient tolerance")->capture_default_str();

  app->add_option("--mple-max-iter", e.mple.newton_max_iter, "MPLE Newton iteration cap")->capture_default_str();
  app->add_option("--mple-tol", e.mple.newton_tol, "MPLE Newton tolerance")->capture_default_str();

  app->add_option("--mcmc-M", e.mcmc.M, "MCMC-MLE samples per iteration")->capture_default_str();
  app->add_option("--mcmc-iter", e.mcmc.max_iter, "MCMC-MLE iterations")->capture_default_str();
  app->add_option("--mcmc-step", e.mcmc.step, "MCMC-MLE Newton step")->capture_default_str();
  app->add_option("--mcmc-tol", e.mcmc.tol, "MCMC-MLE step tolerance")->capture_default_str();
  app->add_option("--mcmc-burn-in", e.mcmc.burn_in, "MCMC-MLE burn-in (-1: 20 sweeps)")->capture_default_str();
  app->add_option("--mcmc-thinning", e.mcmc.thinning, "MCMC-MLE thinning (-1: one sweep)")->capture_default_str();
  app->add_option("--mcmc-halvings", e.mcmc.max_halvings, "MCMC-MLE step halvings on a degenerate sample")
      ->capture_default_str();
}

fs::path output_dir(const Common& c) {
  fs::path dir = c.out;
  if (dir.empty()) {
    const char* env = std::getenv(kOutDirEnv);
    dir = (env && *env) ? fs::path(env) : fs::path("vrbea_out");
  }
  fs::create_directories(dir);
  return dir;
}

ModelSpec load_spec(const Common& c, int n) {
  ModelSpec spec = ModelSpec::parse(c.spec);
  if (!c.covariate.empty()) {
    std::ifstream in(c.covariate);
    if (!in) throw ConfigError(fmt::format("cannot read covariate '{}'", c.covariate));
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::vector<double> row;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
      rows.push_back(std::move(row));
    }
    Eigen::MatrixXd z(rows.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size()) throw ConfigError("the covariate matrix must be square");
      for (std::size_t j = 0; j < rows.size(); ++j) z(i, j) = rows[i][j];
    }
    spec.covariate = z;
  }
  spec.validate(n);
  return spec;
}

double resolve_alpha(const std::string& alpha, int n) {
  if (alpha == "auto") return 0.002 * n * n;
  try {
    std::size_t used = 0;
    const double v = std::stod(alpha, &used);
    if (used == alpha.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(fmt::format("--alpha must be a number or 'auto', got '{}'", alpha));
}

void resolve_estimators(EstimatorOptions& e, int n) {
  e.vrbea.lower.alpha = resolve_alpha(e.alpha, n);
  e.vrbea.mu_base = parse_mu_base(e.mu_base);
  e.mz.zeta = e.vrbea.lower.zeta;
}

json to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(v[k]);
  return a;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError(fmt::format("cannot write '{}'", path.string()));
  out << text;
}

// run.toml is the resolved configuration; manifest.json embeds it.
// Only the invoked subcommand is echoed, and unset string options are dropped.
std::string resolved_config(const CLI::App& root) {
  std::string prefix;
  for (const CLI::App* sub : root.get_subcommands()) prefix = sub->get_name() + ".";
  std::istringstream in(root.config_to_str(true, false));
  std::string out, line;
  while (std::getline(in, line)) {
    if (line.rfind(prefix, 0) != 0 || line.size() < 3 || line.compare(line.size() - 3, 3, "=\"\"") == 0) continue;
    out += line + "\n";
  }
  return out;
}

void write_run_files(const CLI::App& root, const fs::path& dir, json manifest) {
  const std::string config = resolved_config(root);
  write_text(dir / "run.toml", config);
  manifest["config"] = config;
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
}

// ------------------------------------------------------------------ sample

struct SampleCmd {
  Common common;
  SamplerConfig sampler;
  int n = 0;
  std::string theta;
  std::string format = "edgelist";
};

int cmd_sample(const CLI::App& root, SampleCmd& c) {
  const ModelSpec spec = load_spec(c.common, c.n);
  const Eigen::VectorXd theta = parse_vector(c.theta);
  check_theta(theta, spec);
  if (c.format != "edgelist" && c.format != "adjacency" && c.format != "packed")
    throw ConfigError(fmt::format("unknown format '{}' (expected edgelist, adjacency or packed)", c.format));
  SamplerConfig cfg = c.sampler;
  cfg.seed = c.common.seed;
  cfg = cfg.resolved(c.n, theta);
  cfg.validate();
  const fs::path dir = output_dir(c.common);
  const std::vector<Graph> graphs = metropolis_sample(c.n, theta, spec, cfg);

  json files = json::array();
  if (c.format == "packed") {
    std::ofstream out(dir / "samples.txt");
    write_packed_samples(out, graphs,
                         {{"n", std::to_string(c.n)},
                          {"spec", spec.to_string()},
                          {"theta", c.theta},
                          {"seed", std::to_string(cfg.seed)}});
    files.push_back("samples.txt");
  } else {
    for (std::size_t k = 0; k < graphs.size(); ++k) {
      const std::string name = fmt::format("graph_{:04d}.csv", k);
      write_graph(dir / name, graphs[k], c.format == "edgelist");
      files.push_back(name);
    }
  }
  const DegeneracyReport rep = degeneracy_report(graphs);
  double dmin = 1.0, dmax = 0.0, dmean = 0.0;
  for (const Graph& g : graphs) {
    dmin = std::min(dmin, g.density());
    dmax = std::max(dmax, g.density());
    dmean += g.density();
  }
  dmean /= static_cast<double>(graphs.size());

  json m;
  m["command"] = "sample";
  m["n"] = c.n;
  m["spec"] = spec.to_string();
  m["theta"] = to_json(theta);
  m["seed"] = cfg.seed;
  m["burn_in"] = cfg.burn_in;
  m["thinning"] = cfg.thinning;
  m["init_p"] = cfg.init_p;
  m["count"] = cfg.count;
  m["density"] = {{"mean", dmean}, {"min", dmin}, {"max", dmax}};
  m["degeneracy"] = {{"near_empty_fraction", rep.near_empty_fraction},
                     {"near_complete_fraction", rep.near_complete_fraction},
                     {"almost_fully_connected", rep.almost_fully_connected}};
  m["files"] = files;
  write_run_files(root, dir, m);
  fmt::print("{} graphs on {} nodes, mean density {:.4f} -> {}\n", graphs.size(), c.n, dmean, dir.string());
  return kExitOk;
}

// ---------------------------------------------------------------- estimate

struct EstimateCmd {
  Common common;
  EstimatorOptions est;
  std::string method = "vrbea";
  std::string graph;
  std::string theta0;
  int n = 0;
};

int print_exact(const CLI::App& root, const Common& common, int n, const std::string& theta_text,
                const std::string& graph_path) {
  const ModelSpec spec = load_spec(common, n);
  if (theta_text.empty()) throw ConfigError("exact evaluation needs a parameter vector");
  const Eigen::VectorXd theta = parse_vector(theta_text);
  check_theta(theta, spec);
  const ExactModel model = ExactModel::build(n, theta, spec, common.jobs);
  json m;
  m["command"] = "exact";
  m["n"] = n;
  m["spec"] = spec.to_string();
  m["theta"] = to_json(theta);
  m["psi"] = model.psi();
  m["log_partition"] = model.log_partition;
  m["mean_stats"] = to_json(model.mean_stats());
  fmt::print("psi_n = {:.15g}\nlog Z = {:.15g}\n", model.psi(), model.log_partition);
  if (!graph_path.empty()) {
    const Graph g = read_graph(graph_path, n);
    if (g.size() != n) throw ConfigError("graph size does not match --n");
    m["loglik"] = exact_loglik(theta, g, spec);
    fmt::print("loglik = {:.15g}\n", m["loglik"].get<double>());
  }
  const fs::path dir = output_dir(common);
  write_run_files(root, dir, m);
  return kExitOk;
}

int cmd_estimate(const CLI::App& root, EstimateCmd& c) {
  if (c.method == "exact") {
    int n = c.n;
    if (n <= 0 && !c.graph.empty()) n = read_graph(c.graph).size();
    if (n <= 0) throw ConfigError("--method exact needs --n or --graph");
    return print_exact(root, c.common, n, c.theta0, c.graph);
  }
  if (c.graph.empty()) throw ConfigError("--graph is required");
  const Graph g = read_graph(c.graph, c.n);
  const int n = g.size();
  const ModelSpec spec = load_spec(c.common, n);
  resolve_estimators(c.est, n);
  const Eigen::VectorXd theta0 =
      c.theta0.empty() ? Eigen::VectorXd::Zero(spec.dim()).eval() : parse_vector(c.theta0);
  check_theta(theta0, spec);

  const Estimator method = parse_estimator(c.method);
  EstimationResult res;
  switch (method) {
    case Estimator::vrbea: {
      OuterConfig cfg = c.est.vrbea;
      cfg.theta0 = theta0;
      cfg.seed = c.common.seed;
      res = vrbea_estimate(g, spec, cfg);
      break;
    }
    case Estimator::mz: {
      MzConfig cfg = c.est.mz;
      cfg.theta0 = theta0;
      cfg.seed = c.common.seed;
      res = mz_estimate(g, spec, cfg);
      break;
    }
    case Estimator::mple: res = mple_estimate(g, spec, c.est.mple); break;
    case Estimator::mcmc_mle: {
      McmcMleConfig cfg = c.est.mcmc;
      cfg.theta0 = theta0;
      cfg.seed = c.common.seed;
      res = mcmc_mle_estimate(g, spec, cfg);
      break;
    }
  }

  const fs::path dir = output_dir(c.common);
  {
    std::ofstream out(dir / "result.json");
    write_result_json(out, res, spec);
  }
  json files = json::array({"result.json"});
  if (!res.trace.rows.empty()) {
    std::ofstream out(dir / "trace.csv");
    res.trace.write_csv(out, res.method);
    files.push_back("trace.csv");
  }
  json m;
  m["command"] = "estimate";
  m["method"] = res.method;
  m["graph"] = c.graph;
  m["n"] = n;
  m["spec"] = spec.to_string();
  m["theta0"] = to_json(theta0);
  m["alpha_resolved"] = c.est.vrbea.lower.alpha;
  m["files"] = files;
  write_run_files(root, dir, m);

  fmt::print("{} theta_hat = ({})\n", res.method,
             fmt::join(std::vector<double>(res.theta_hat.data(), res.theta_hat.data() + res.theta_hat.size()), ", "));
  if (!res.termination.empty()) fmt::print("termination: {}\n", res.termination);
  for (const auto& [name, on] : res.flags)
    if (on) fmt::print("flag: {}\n", name);
  if (res.flag("nonfinite")) {
    fmt::print(stderr, "numeric failure; partial trace written to {}\n", dir.string());
    return kExitNumeric;
  }
  return kExitOk;
}

// ------------------------------------------------------------- mc / sweep

struct McCmd {
  Common common;
  SamplerConfig sampler;
  EstimatorOptions est;
  int n = 50;
  std::string truth = "-1,1";
  int R = 50;
  std::string estimators = "vrbea";
  double perturbation = 0.0;
  int bins = 40;
  // sweep only
  std::string grid = "eps";
  std::string values;
};

McDesign build_design(McCmd& c) {
  McDesign d;
  d.n = c.n;
  d.spec = load_spec(c.common, c.n);
  d.truth = parse_vector(c.truth);
  d.R = c.R;
  d.estimators = parse_estimators(c.estimators);
  d.perturbation = c.perturbation;
  d.sampler = c.sampler;
  resolve_estimators(c.est, c.n);
  d.vrbea = c.est.vrbea;
  d.mz = c.est.mz;
  d.mple = c.est.mple;
  d.mcmc = c.est.mcmc;
  d.seed = c.common.seed;
  d.jobs = c.common.jobs;
  d.validate();
  return d;
}

json design_json(const McDesign& d) {
  json m;
  m["n"] = d.n;
  m["spec"] = d.spec.to_string();
  m["truth"] = to_json(d.truth);
  m["R"] = d.R;
  json names = json::array();
  for (Estimator e : d.estimators) names.push_back(std::string(to_string(e)));
  m["estimators"] = names;
  m["perturbation"] = d.perturbation;
  const SamplerConfig s = d.sampler.resolved(d.n, d.truth);
  m["sampler"] = {{"burn_in", s.burn_in}, {"thinning", s.thinning}, {"init_p", s.init_p}, {"gibbs", s.gibbs}};
  m["alpha_resolved"] = d.vrbea.lower.alpha;
  m["seed_scheme"] = "derive_seed(seed, rep, 0) network, 1 perturbation, 2+e estimator e in (vrbea, mz, mple, mcmc_mle)";
  return m;
}

void print_runtimes(const std::vector<ReplicationRecord>& records) {
  std::map<std::string, std::pair<double, int>> acc;
  for (const ReplicationRecord& r : records) {
    auto& [sum, count] = acc[std::string(to_string(r.estimator))];
    sum += r.seconds;
    ++count;
  }
  for (const auto& [name, v] : acc) fmt::print("{:<10} mean runtime {:.3f} s\n", name, v.first / v.second);
}

int cmd_mc(const CLI::App& root, McCmd& c) {
  const McDesign d = build_design(c);
  const fs::path dir = output_dir(c.common);
  const McResult res = run_design(d);
  write_summary_csv(dir / "summary.csv", res.summary);
  write_replications_csv(dir / "replications.csv", d, res.records);
  write_histograms(dir, d, res.records, c.bins);
  json files = json::array({"summary.csv", "replications.csv"});
  for (StatKind k : d.spec.kinds) files.push_back(fmt::format("hist_{}.csv", to_string(k)));
  json m;
  m["command"] = "mc";
  m["design"] = design_json(d);
  m["files"] = files;
  m["columns"] = output_columns();
  write_run_files(root, dir, m);
  fmt::print("{}", format_table(res.summary));
  print_runtimes(res.records);
  return kExitOk;
}

int cmd_sweep(const CLI::App& root, McCmd& c) {
  const McDesign d = build_design(c);
  if (c.grid != "eps" && c.grid != "eta") throw ConfigError(fmt::format("--grid must be eps or eta, got '{}'", c.grid));
  std::vector<double> values;
  if (c.values.empty()) {
    values = c.grid == "eps" ? std::vector<double>{0.0, 1e-4, 1e-2, 1.0} : std::vector<double>{0.2, 0.4, 0.6, 0.8, 1.0};
  } else {
    const Eigen::VectorXd v = parse_vector(c.values);
    values.assign(v.data(), v.data() + v.size());
  }
  const fs::path dir = output_dir(c.common);
  const std::vector<PathRow> rows = c.grid == "eps" ? sweep_regularization(d, values) : sweep_eta(d, values);
  const std::string file = fmt::format("path_{}.csv", c.grid);
  write_path_csv(dir / file, c.grid, rows);
  json m;
  m["command"] = "sweep";
  m["design"] = design_json(d);
  m["grid"] = c.grid;
  m["values"] = values;
  m["files"] = json::array({file});
  json cols;
  cols[file] = output_columns()[file];
  m["columns"] = cols;
  write_run_files(root, dir, m);
  for (const PathRow& r : rows)
    fmt::print("{}={:<8g} {:<10} mean {:>9.4f} var {:>10.3e} sign% {:>6.2f} F {:>10.5f} q_hat {:>10.3e}\n", c.grid,
               r.value, r.param, r.summary.mean, r.summary.variance, r.summary.sign_recovery, r.mean_F, r.mean_q_hat);
  return kExitOk;
}

// ------------------------------------------------------------------- exact

struct ExactCmd {
  Common common;
  int n = 0;
  std::string theta;
  std::string graph;
};

void add_mc_options(CLI::App* app, McCmd& c) {
  add_common(app, c.common, true);
  add_sampler(app, c.sampler);
  add_estimators(app, c.est);
  app->add_option("--n", c.n, "Nodes")->capture_default_str();
  app->add_option("--truth", c.truth, "True parameter, e.g. --truth=-1,1")->capture_default_str();
  app->add_option("--R", c.R, "Replications")->capture_default_str();
  app->add_option("--estimators", c.estimators, "Comma list of vrbea, mz, mple, mcmc_mle")->capture_default_str();
  app->add_option("--perturb", c.perturbation, "Uniform initial perturbation half-width")->capture_default_str();
  app->add_option("--bins", c.bins, "Histogram bins")->capture_default_str()->check(CLI::PositiveNumber);
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Variational bilevel estimation of exponential random graph models"};
  app.name(args.empty() ? "vrbea" : fs::path(args[0]).filename().string());
  app.set_config("--config", "", "TOML configuration (keys as long option names, [subcommand] sections)");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);
  app.fallthrough();

  SampleCmd sample;
  CLI::App* s = app.add_subcommand("sample", "Draw networks from the ERGM");
  add_common(s, sample.common, false);
  add_sampler(s, sample.sampler);
  s->add_option("--n", sample.n, "Nodes")->required();
  s->add_option("--theta", sample.theta, "Parameter, e.g. --theta=-1,1")->required();
  s->add_option("--count", sample.sampler.count, "Retained samples")->capture_default_str();
  s->add_option("--format", sample.format, "edgelist, adjacency or packed")->capture_default_str();

  EstimateCmd est;
  CLI::App* e = app.add_subcommand("estimate", "Estimate theta on one observed network");
  add_common(e, est.common, true);
  add_estimators(e, est.est);
  e->add_option("--method", est.method, "vrbea, mz, mple, mcmc_mle or exact")->capture_default_str();
  e->add_option("--graph", est.graph, "Edge-list or adjacency CSV");
  e->add_option("--theta0", est.theta0, "Initial parameter (default zeros)");
  e->add_option("--n", est.n, "Nodes (edge lists without a header; exact method)");

  McCmd mc;
  CLI::App* m = app.add_subcommand("mc", "Monte Carlo replication design");
  add_mc_options(m, mc);

  McCmd sweep;
  CLI::App* w = app.add_subcommand("sweep", "VRBEA hyperparameter path over eps or eta");
  add_mc_options(w, sweep);
  w->add_option("--grid", sweep.grid, "eps or eta")->capture_default_str();
  w->add_option("--values", sweep.values, "Grid values (default eps 0,1e-4,1e-2,1; eta 0.2..1)");

  ExactCmd exact;
  CLI::App* x = app.add_subcommand("exact", "Exact log-partition by enumeration (n <= 6)");
  add_common(x, exact.common, true);
  x->add_option("--n", exact.n, "Nodes")->required();
  x->add_option("--theta", exact.theta, "Parameter, e.g. --theta=-1,1")->required();
  x->add_option("--graph", exact.graph, "Optional graph for the exact log-likelihood");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  if (!argv.empty()) argv.pop_back();
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::CallForAllHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex);
    return kExitUsage;
  }

  try {
    if (s->parsed()) return cmd_sample(app, sample);
    if (e->parsed()) return cmd_estimate(app, est);
    if (m->parsed()) return cmd_mc(app, mc);
    if (w->parsed()) return cmd_sweep(app, sweep);
    if (x->parsed()) return print_exact(app, exact.common, exact.n, exact.theta, exact.graph);
  } catch (const NumericError& ex) {
    fmt::print(stderr, "numeric failure: {}\n", ex.what());
    return kExitNumeric;
  } catch (const ConfigError& ex) {
    fmt::print(stderr, "error: {}\n", ex.what());
    return kExitUsage;
  } catch (const DomainError& ex) {
    fmt::print(stderr, "error: {}\n", ex.what());
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& ex) {
    fmt::print(stderr, "error: {}\n", ex.what());
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace vrbea::cli
