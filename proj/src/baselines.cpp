#include "vrbea/baselines.hpp"

#include "vrbea/errors.hpp"
#include "vrbea/graph_stats.hpp"
#include "vrbea/rng.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace vrbea {

namespace {

double n_squared(int n) { return static_cast<double>(n) * n; }

bool is_edges_only(const ModelSpec& spec) {
  return spec.kinds.size() == 1 && spec.kinds[0] == StatKind::edges;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

// ---------------------------------------------------------------- Mele-Zhu

void MzConfig::validate(const ModelSpec& spec) const {
  if (!(eps_tol > 0.0)) throw ConfigError(fmt::format("eps_tol must be positive, got {}", eps_tol));
  if (K_starts < 1) throw ConfigError(fmt::format("K_starts must be at least 1, got {}", K_starts));
  if (inner_max_iter < 1 || outer_max_iter < 0 || max_backtracks < 1)
    throw ConfigError("Mele-Zhu iteration caps must be positive");
  if (!(outer_tol > 0.0) || !(rel_tol >= 0.0)) throw ConfigError("Mele-Zhu tolerances must be positive");
  if (!(zeta > 0.0 && zeta < 0.5)) throw ConfigError(fmt::format("zeta must lie in (0, 0.5), got {}", zeta));
  if (!spec.is_edge_triangle() && !is_edges_only(spec))
    throw ConfigError("the Mele-Zhu baseline supports the edges,triangles and edges specs only");
  check_theta(theta0, spec);
}

MzInnerResult mz_fixed_point_inner(const Eigen::VectorXd& theta, const MeanField& mu0, const MzConfig& cfg) {
  const ModelSpec spec = ModelSpec::edge_triangle();
  check_theta(theta, spec);
  const int n = mu0.size();
  const double zeta = cfg.zeta;
  MzInnerResult out{mu0, 0, {}};
  double psi = gamma_n(theta, out.mu, spec);
  out.psi_trace.push_back(psi);
  for (int pass = 0; pass < cfg.inner_max_iter; ++pass) {
    const Eigen::MatrixXd& m = out.mu.values();
    const Eigen::MatrixXd arg = (theta[1] / n) * (m * m);
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(n, n);
    for (int j = 1; j < n; ++j)
      for (int i = 0; i < j; ++i)
        next(i, j) = next(j, i) = std::clamp(sigmoid(theta[0] + arg(i, j)), zeta, 1.0 - zeta);
    out.mu = MeanField(std::move(next), zeta);
    const double psi_next = gamma_n(theta, out.mu, spec);
    out.psi_trace.push_back(psi_next);
    const double diff = psi_next - psi;
    if ((cfg.abs_diff ? std::abs(diff) : diff) < cfg.eps_tol) break;
    ++out.iterations;
    psi = psi_next;
  }
  return out;
}

MzPsi mz_multistart_psi(const Eigen::VectorXd& theta, int n, const MzConfig& cfg) {
  std::optional<MzPsi> best;
  std::vector<int> iterations;
  for (int k = 0; k < cfg.K_starts; ++k) {
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(k), 0));
    const MzInnerResult r = mz_fixed_point_inner(theta, random_meanfield(n, cfg.zeta, rng), cfg);
    iterations.push_back(r.iterations);
    const double psi = r.psi_trace.back();
    if (!best || psi > best->psi) best = MzPsi{psi, r.mu, {}};
  }
  best->iterations = std::move(iterations);
  return *best;
}

EstimationResult mz_estimate(const Graph& g, const ModelSpec& spec, const MzConfig& cfg) {
  spec.validate(g.size());
  cfg.validate(spec);
  const int n = g.size();
  const int d = spec.dim();
  const ModelSpec et = ModelSpec::edge_triangle();
  const Eigen::VectorXd stats_g = stats_vector(g, et);
  std::vector<double> inner_iterations;
  int evaluations = 0;

  struct Eval {
    double loss;
    Eigen::VectorXd grad;
  };
  // loss = psi_bar(theta) - T_n(theta | g); the gradient treats mu_bar as fixed.
  const auto evaluate = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(2);
    full.head(d) = x;
    const MzPsi p = mz_multistart_psi(full, n, cfg);
    ++evaluations;
    for (int it : p.iterations) inner_iterations.push_back(it);
    const Eigen::VectorXd diff = (stats_vector(p.mu, et) - stats_g) / n_squared(n);
    return Eval{p.psi - full.dot(stats_g) / n_squared(n), diff.head(d)};
  };

  EstimationResult result;
  result.method = "mz";
  Eigen::VectorXd x = cfg.theta0;
  Eval cur = evaluate(x);
  const int first_eval_iterations = inner_iterations.empty() ? 0 : static_cast<int>(inner_iterations.front());
  Eigen::MatrixXd H = Eigen::MatrixXd::Identity(d, d);
  result.termination = "maximum iterations reached";
  int iter = 0;
  for (; iter < cfg.outer_max_iter; ++iter) {
    if (!std::isfinite(cur.loss) || !cur.grad.allFinite()) {
      result.termination = "non-finite objective";
      result.flags["nonfinite"] = true;
      break;
    }
    if (cur.grad.lpNorm<Eigen::Infinity>() < cfg.outer_tol) {
      result.termination = "converged: gradient norm below tolerance";
      break;
    }
    Eigen::VectorXd p = -H * cur.grad;
    double slope = cur.grad.dot(p);
    if (!(slope < 0.0)) {
      H.setIdentity();
      p = -cur.grad;
      slope = cur.grad.dot(p);
    }
    double s = 1.0;
    bool accepted = false;
    Eigen::VectorXd xn;
    Eval next;
    for (int b = 0; b < cfg.max_backtracks; ++b, s *= 0.5) {
      xn = x + s * p;
      next = evaluate(xn);
      if (std::isfinite(next.loss) && next.loss <= cur.loss + cfg.armijo_c * s * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      result.termination = "abnormal termination in line search";
      break;
    }
    const Eigen::VectorXd sv = xn - x;
    const Eigen::VectorXd yv = next.grad - cur.grad;
    const double sy = sv.dot(yv);
    if (sy > 1e-12) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);
      H = (I - rho * sv * yv.transpose()) * H * (I - rho * yv * sv.transpose()) + rho * sv * sv.transpose();
    }
    const double reduction = (cur.loss - next.loss) / std::max({std::abs(cur.loss), std::abs(next.loss), 1.0});
    x = xn;
    cur = next;
    if (reduction <= cfg.rel_tol) {
      result.termination = "converged: relative reduction below tolerance";
      ++iter;
      break;
    }
  }
  result.theta_hat = x;
  result.flags["nonfinite"] = result.flag("nonfinite") || !x.allFinite();
  result.flags["line_search_failure"] = result.termination == "abnormal termination in line search";
  result.diagnostics["outer_iterations"] = iter;
  result.diagnostics["objective_evaluations"] = evaluations;
  result.diagnostics["inner_iterations_first"] = first_eval_iterations;
  result.diagnostics["inner_iterations_median"] = median(inner_iterations);
  result.diagnostics["inner_iterations_max"] =
      inner_iterations.empty() ? 0.0 : *std::max_element(inner_iterations.begin(), inner_iterations.end());
  double small = 0.0;
  for (double it : inner_iterations) small += it <= 1.0 ? 1.0 : 0.0;
  result.diagnostics["inner_at_most_one_fraction"] =
      inner_iterations.empty() ? 0.0 : small / static_cast<double>(inner_iterations.size());
  result.diagnostics["final_loss"] = cur.loss;
  return result;
}

// ------------------------------------------------------------------- MPLE

void MpleConfig::validate() const {
  if (newton_max_iter < 1) throw ConfigError("newton_max_iter must be positive");
  if (!(newton_tol > 0.0)) throw ConfigError("newton_tol must be positive");
  if (!(ridge >= 0.0)) throw ConfigError("ridge must be nonnegative");
  if (!(divergence_bound > 0.0)) throw ConfigError("divergence_bound must be positive");
}

Eigen::VectorXd mple_change_stats(const Graph& g, int i, int j, const ModelSpec& spec) {
  return change_stats(g, i, j, spec);
}

namespace {

struct Design {
  Eigen::MatrixXd x;  // one row per dyad i < j
  Eigen::VectorXd y;
};

Design dyad_design(const Graph& g, const ModelSpec& spec) {
  const int n = g.size();
  const Eigen::Index rows = static_cast<Eigen::Index>(n) * (n - 1) / 2;
  Design d{Eigen::MatrixXd(rows, spec.dim()), Eigen::VectorXd(rows)};
  Eigen::Index r = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++r) {
      d.x.row(r) = mple_change_stats(g, i, j, spec).transpose();
      d.y[r] = g.has_edge(i, j) ? 1.0 : 0.0;
    }
  return d;
}

double design_loglik(const Design& d, const Eigen::VectorXd& theta) {
  const Eigen::VectorXd eta = d.x * theta;
  double ll = 0.0;
  for (Eigen::Index r = 0; r < eta.size(); ++r) ll += d.y[r] * eta[r] - softplus(eta[r]);
  return ll;
}

}  // namespace

double pseudo_loglik(const Eigen::VectorXd& theta, const Graph& g, const ModelSpec& spec) {
  check_theta(theta, spec);
  return design_loglik(dyad_design(g, spec), theta);
}

EstimationResult mple_estimate(const Graph& g, const ModelSpec& spec, const MpleConfig& cfg) {
  spec.validate(g.size());
  cfg.validate();
  const Design d = dyad_design(g, spec);
  const int p = spec.dim();
  EstimationResult result;
  result.method = "mple";
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(p);
  double ll = design_loglik(d, theta);
  const double ones = d.y.sum();
  bool separated = ones == 0.0 || ones == static_cast<double>(d.y.size());
  result.termination = "maximum iterations reached";
  int iter = 0;
  Eigen::MatrixXd info = Eigen::MatrixXd::Zero(p, p);
  for (; iter < cfg.newton_max_iter; ++iter) {
    const Eigen::VectorXd eta = d.x * theta;
    Eigen::VectorXd resid(eta.size()), w(eta.size());
    for (Eigen::Index r = 0; r < eta.size(); ++r) {
      const double pr = sigmoid(eta[r]);
      resid[r] = d.y[r] - pr;
      w[r] = pr * (1.0 - pr);
    }
    const Eigen::VectorXd grad = d.x.transpose() * resid;
    info = d.x.transpose() * w.asDiagonal() * d.x;
    const Eigen::MatrixXd H = info + cfg.ridge * Eigen::MatrixXd::Identity(p, p);
    const Eigen::VectorXd step = H.ldlt().solve(grad);
    if (!step.allFinite()) {
      result.termination = "singular pseudo-likelihood Hessian";
      break;
    }
    double s = 1.0;
    double ll_new = design_loglik(d, theta + step);
    for (int b = 0; b < 50 && !(ll_new >= ll); ++b) {
      s *= 0.5;
      ll_new = design_loglik(d, theta + s * step);
    }
    if (!(ll_new >= ll)) {
      result.termination = "line search could not increase the pseudo-likelihood";
      break;
    }
    theta += s * step;
    ll = ll_new;
    if (theta.lpNorm<Eigen::Infinity>() > cfg.divergence_bound) {
      separated = true;
      result.termination = "diverging estimate (separation)";
      ++iter;
      break;
    }
    if ((s * step).lpNorm<Eigen::Infinity>() < cfg.newton_tol) {
      result.termination = "converged";
      ++iter;
      break;
    }
  }
  result.theta_hat = theta;
  const Eigen::MatrixXd cov = (info + cfg.ridge * Eigen::MatrixXd::Identity(p, p)).inverse();
  result.std_errors = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  result.flags["separation"] = separated;
  result.flags["nonfinite"] = !theta.allFinite();
  result.diagnostics["newton_iterations"] = iter;
  result.diagnostics["pseudo_loglik"] = ll;
  return result;
}

// --------------------------------------------------------------- MCMC-MLE

void McmcMleConfig::validate(const ModelSpec& spec) const {
  if (M < 2) throw ConfigError(fmt::format("M must be at least 2, got {}", M));
  if (!(step > 0.0)) throw ConfigError(fmt::format("step must be positive, got {}", step));
  if (!(tol > 0.0)) throw ConfigError(fmt::format("tol must be positive, got {}", tol));
  if (max_iter < 1) throw ConfigError(fmt::format("max_iter must be positive, got {}", max_iter));
  if (!(ridge >= 0.0)) throw ConfigError("ridge must be nonnegative");
  if (max_halvings < 0) throw ConfigError(fmt::format("max_halvings must be nonnegative, got {}", max_halvings));
  check_theta(theta0, spec);
}

ScoreEstimate mcmc_score(const Eigen::VectorXd& theta, const Graph& g, const ModelSpec& spec,
                         const McmcMleConfig& cfg, std::uint64_t seed) {
  const int n = g.size();
  const long long sweep = static_cast<long long>(n) * (n - 1) / 2;
  const long long burn_in = cfg.burn_in < 0 ? 20 * sweep : cfg.burn_in;
  const long long thinning = cfg.thinning < 0 ? sweep : cfg.thinning;
  MetropolisChain chain(g, theta, spec, seed);
  chain.run(burn_in);
  const int d = spec.dim();
  Eigen::MatrixXd samples(cfg.M, d);
  long long extreme = 0;
  for (int m = 0; m < cfg.M; ++m) {
    if (m > 0) chain.run(thinning);
    samples.row(m) = stats_vector(chain.state(), spec).transpose();
    const double density = chain.state().density();
    if (density < 0.05 || density > 0.95) ++extreme;
  }
  ScoreEstimate out;
  out.mean = samples.colwise().mean().transpose();
  const Eigen::MatrixXd centered = samples.rowwise() - out.mean.transpose();
  out.cov = centered.transpose() * centered / static_cast<double>(cfg.M - 1);
  out.score = stats_vector(g, spec) - out.mean;
  out.extreme_fraction = static_cast<double>(extreme) / cfg.M;
  return out;
}

namespace {

constexpr double kRankTolerance = 1e-10;

// Near-empty or near-complete samples, or a covariance with a (numerically)
// zero-variance direction, give no usable Newton step.
bool unusable(const ScoreEstimate& s) {
  if (s.extreme_fraction > 0.99) return true;
  const Eigen::VectorXd eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(s.cov).eigenvalues();
  return !(eig.maxCoeff() > 0.0) || eig.minCoeff() <= kRankTolerance * eig.maxCoeff();
}

}  // namespace

EstimationResult mcmc_mle_estimate(const Graph& g, const ModelSpec& spec, const McmcMleConfig& cfg) {
  spec.validate(g.size());
  cfg.validate(spec);
  const int d = spec.dim();
  EstimationResult result;
  result.method = "mcmc_mle";
  Eigen::VectorXd theta = cfg.theta0;
  bool degenerate = false;
  int halvings = 0;
  // Sample for iteration t and trial step length h uses stream (t, h).
  const auto draw = [&](const Eigen::VectorXd& at, int t, int h) {
    ScoreEstimate s = mcmc_score(at, g, spec, cfg,
                                 derive_seed(cfg.seed, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(h)));
    if (s.extreme_fraction > 0.99) degenerate = true;
    return s;
  };
  result.termination = "maximum iterations reached";
  ScoreEstimate s = draw(theta, 0, 0);
  int iter = 0;
  if (unusable(s)) {
    result.flags["singular_covariance"] = true;
    result.termination = "degenerate sample at the initial value";
  } else {
    for (; iter < cfg.max_iter; ++iter) {
      const Eigen::MatrixXd H = s.cov + cfg.ridge * Eigen::MatrixXd::Identity(d, d);
      Eigen::VectorXd step = cfg.step * H.ldlt().solve(s.score);
      if (!step.allFinite()) {
        result.termination = "singular sample covariance";
        result.flags["nonfinite"] = true;
        break;
      }
      // Halve the step until the sample at the new value is usable.
      bool accepted = false;
      ScoreEstimate next;
      for (int h = 0; h <= cfg.max_halvings; ++h, step *= 0.5) {
        next = draw(theta + step, iter + 1, h);
        if (!unusable(next)) {
          accepted = true;
          halvings += h;
          break;
        }
      }
      if (!accepted) {
        result.termination = "degenerate sample at every step length";
        break;
      }
      theta += step;
      s = std::move(next);
      if (step.norm() < cfg.tol) {
        result.termination = "converged";
        ++iter;
        break;
      }
    }
  }
  result.theta_hat = theta;
  result.flags["degenerate"] = degenerate;
  result.flags.try_emplace("singular_covariance", false);
  result.flags["nonfinite"] = result.flag("nonfinite") || !theta.allFinite();
  result.diagnostics["newton_iterations"] = iter;
  result.diagnostics["step_halvings"] = halvings;
  return result;
}

}  // namespace vrbea
