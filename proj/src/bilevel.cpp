#include "vrbea/bilevel.hpp"

#include "vrbea/errors.hpp"
#include "vrbea/graph_stats.hpp"

#include <fmt/format.h>

#include <cmath>

namespace vrbea {

double JointVector::dot(const JointVector& other) const {
  double s = theta.dot(other.theta);
  if (mu.size() > 0 && other.mu.size() > 0) s += pair_dot(mu, other.mu);
  return s;
}

MuBase parse_mu_base(std::string_view name) {
  if (name == "inner") return MuBase::inner;
  if (name == "tracked") return MuBase::tracked;
  throw ConfigError(fmt::format("unknown mu base '{}' (expected inner or tracked)", name));
}

std::string_view to_string(MuBase base) { return base == MuBase::inner ? "inner" : "tracked"; }

void OuterConfig::validate(const ModelSpec& spec) const {
  if (!(xi > 0.0) || !std::isfinite(xi)) throw ConfigError(fmt::format("xi must be positive, got {}", xi));
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ConfigError(fmt::format("eta must be positive, got {}", eta));
  if (T < 1) throw ConfigError(fmt::format("T must be at least 1, got {}", T));
  if (!(gamma >= 0.0)) throw ConfigError(fmt::format("gamma must be nonnegative, got {}", gamma));
  lower.validate();
  check_theta(theta0, spec);
}

double OuterConfig::step_size() const { return inv_sqrt_step ? 1.0 / std::sqrt(static_cast<double>(T)) : xi; }

namespace {

double n_squared(int n) { return static_cast<double>(n) * n; }

}  // namespace

double upper_Fn(const Eigen::VectorXd& theta, const Graph& g, const MeanField& mu_star, const ModelSpec& spec,
                double epsilon) {
  return -scaled_potential(theta, g, spec) - f_lower(theta, mu_star, spec, epsilon);
}

Eigen::VectorXd grad_Fn_theta(const Eigen::VectorXd& theta, const Graph& g, const MeanField& mu_star,
                              const ModelSpec& spec) {
  check_theta(theta, spec);
  return (stats_vector(mu_star, spec) - stats_vector(g, spec)) / n_squared(g.size());
}

double q_hat(const Eigen::VectorXd& theta, const MeanField& mu, const MeanField& mu_K, const ModelSpec& spec,
             double epsilon) {
  return f_lower(theta, mu, spec, epsilon) - f_lower(theta, mu_K, spec, epsilon);
}

JointVector grad_q_hat(const Eigen::VectorXd& theta, const MeanField& mu, const MeanField& mu_K,
                       const ModelSpec& spec, double epsilon) {
  const LowerEvaluation at_mu = evaluate_lower(theta, mu, spec, epsilon, false, true);
  JointVector out;
  out.theta = (stats_vector(mu_K, spec) - at_mu.stats) / n_squared(mu.size());
  out.mu = at_mu.grad;
  return out;
}

double barrier_multiplier(const JointVector& gF, const JointVector& gq, double eta) {
  const double norm_sq = gq.squared_norm();
  if (norm_sq == 0.0) return 0.0;
  return std::max(0.0, eta - gF.dot(gq) / norm_sq);
}

double stationarity_K(const JointVector& gF, const JointVector& gq, double q_value, double eta) {
  const double lambda = barrier_multiplier(gF, gq, eta);
  JointVector d{gF.theta + lambda * gq.theta, lambda * gq.mu};
  return d.squared_norm() + q_value;
}

double energy_Phi(double F_value, double q_value, double gamma) { return F_value + gamma * q_value; }

StepReport evaluate_step(const OuterState& state, const Graph& g, const ModelSpec& spec, const OuterConfig& cfg,
                         int t) {
  const double eps = cfg.lower.epsilon;
  const double n2 = n_squared(g.size());
  LowerLevelConfig inner_cfg = cfg.lower;
  inner_cfg.record_objective = false;
  const InnerResult inner = inner_loop(state.theta, state.mu, spec, inner_cfg);

  const LowerEvaluation at_t = evaluate_lower(state.theta, state.mu, spec, eps, true, true);
  const LowerEvaluation at_K = evaluate_lower(state.theta, inner.mu, spec, eps, true, false);
  const Eigen::VectorXd stats_g = stats_vector(g, spec);

  JointVector gF{(at_K.stats - stats_g) / n2, Eigen::MatrixXd()};
  JointVector gq{(at_K.stats - at_t.stats) / n2, at_t.grad};

  StepReport report;
  const double q = at_t.value - at_K.value;
  const double lambda = barrier_multiplier(gF, gq, cfg.eta);
  report.delta.theta = gF.theta + lambda * gq.theta;
  report.delta.mu = lambda * gq.mu;
  report.gq_norm_sq = gq.squared_norm();
  report.barrier_slack = gq.dot(report.delta) - cfg.eta * report.gq_norm_sq;

  TraceRow& row = report.row;
  row.t = t;
  row.theta = state.theta;
  row.F = -state.theta.dot(stats_g) / n2 - at_K.value;
  row.q_hat = q;
  row.lambda = lambda;
  row.delta_norm_sq = report.delta.squared_norm();
  row.K_t = row.delta_norm_sq + q;
  row.Phi = energy_Phi(row.F, q, cfg.gamma);

  report.mu_K = inner.mu;

  if (!report.delta.theta.allFinite() || !report.delta.mu.allFinite() || !std::isfinite(row.F) ||
      !std::isfinite(q))
    throw NumericError(fmt::format("non-finite outer step quantities at t = {}", t));
  return report;
}

StepReport outer_step(OuterState& state, const Graph& g, const ModelSpec& spec, const OuterConfig& cfg, int t) {
  StepReport report = evaluate_step(state, g, spec, cfg, t);
  const double xi = cfg.step_size();
  state.theta -= xi * report.delta.theta;
  const MeanField& base = cfg.mu_base == MuBase::inner ? *report.mu_K : state.mu;
  state.mu = project_U(base.values() - xi * report.delta.mu, cfg.lower.zeta);
  return report;
}

EstimationResult vrbea_estimate(const Graph& g, const ModelSpec& spec, const OuterConfig& cfg) {
  spec.validate(g.size());
  cfg.validate(spec);
  Rng rng(cfg.seed);
  OuterState state{cfg.theta0, random_meanfield(g.size(), cfg.lower.zeta, rng)};

  EstimationResult result;
  result.method = "vrbea";
  result.flags["nonfinite"] = false;
  result.trace.rows.reserve(static_cast<std::size_t>(cfg.T) + 1);
  double min_slack = 0.0;
  try {
    for (int t = 0; t < cfg.T; ++t) {
      StepReport report = outer_step(state, g, spec, cfg, t);
      min_slack = std::min(min_slack, report.barrier_slack);
      result.trace.rows.push_back(std::move(report.row));
    }
    result.trace.rows.push_back(evaluate_step(state, g, spec, cfg, cfg.T).row);
    result.termination = fmt::format("completed {} outer steps", cfg.T);
  } catch (const NumericError& e) {
    result.flags["nonfinite"] = true;
    result.termination = e.what();
  }
  result.theta_hat = state.theta;
  result.mu_final = state.mu;
  result.diagnostics["outer_steps"] = static_cast<double>(result.trace.rows.size()) - 1.0;
  result.diagnostics["min_barrier_slack"] = min_slack;
  if (!result.trace.rows.empty()) {
    result.diagnostics["final_F"] = result.trace.rows.back().F;
    result.diagnostics["final_q_hat"] = result.trace.rows.back().q_hat;
  }
  return result;
}

}  // namespace vrbea
