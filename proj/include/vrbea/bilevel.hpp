#pragma once

// Variational regularized bilevel estimation.
//
// Upper level  F_n(theta) = -T_n(theta | g) - f^eps(theta, mu_K)
// Surrogate    q_hat     = f^eps(theta, mu_t) - f^eps(theta, mu_K)
//
// Each outer step moves (theta, mu) jointly along
//   delta = grad F + lambda * grad q_hat,
//   lambda = max(0, eta - <grad F, grad q_hat> / ||grad q_hat||^2),
// so that <grad q_hat, delta> >= eta ||grad q_hat||^2.

#include "vrbea/estimation.hpp"
#include "vrbea/meanfield.hpp"
#include "vrbea/model.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string_view>

namespace vrbea {

/// Element of the joint (theta, mu) space. The mu block is a symmetric
/// matrix whose inner product runs over the upper triangle (tied pairs).
struct JointVector {
  Eigen::VectorXd theta;
  Eigen::MatrixXd mu;  // empty means the zero block

  double dot(const JointVector& other) const;
  double squared_norm() const { return dot(*this); }
};

/// Point from which the joint step moves mu: the inner-loop output mu_K
/// or the tracked iterate mu_t.
enum class MuBase { inner, tracked };

MuBase parse_mu_base(std::string_view name);
std::string_view to_string(MuBase base);

struct OuterConfig {
  double xi = 0.03;
  double eta = 0.8;
  int T = 20000;
  LowerLevelConfig lower;
  Eigen::VectorXd theta0;
  std::uint64_t seed = 0;
  /// Weight of q_hat in the logged energy Phi = F + gamma * q_hat.
  double gamma = 1.0;
  /// Use xi_t = 1/sqrt(T) instead of the constant xi.
  bool inv_sqrt_step = false;
  MuBase mu_base = MuBase::inner;

  void validate(const ModelSpec& spec) const;
  double step_size() const;
};

double upper_Fn(const Eigen::VectorXd& theta, const Graph& g, const MeanField& mu_star, const ModelSpec& spec,
                double epsilon);
Eigen::VectorXd grad_Fn_theta(const Eigen::VectorXd& theta, const Graph& g, const MeanField& mu_star,
                              const ModelSpec& spec);
double q_hat(const Eigen::VectorXd& theta, const MeanField& mu, const MeanField& mu_K, const ModelSpec& spec,
             double epsilon);
JointVector grad_q_hat(const Eigen::VectorXd& theta, const MeanField& mu, const MeanField& mu_K,
                       const ModelSpec& spec, double epsilon);

double barrier_multiplier(const JointVector& gF, const JointVector& gq, double eta);
double stationarity_K(const JointVector& gF, const JointVector& gq, double q_value, double eta);
double energy_Phi(double F_value, double q_value, double gamma);

struct OuterState {
  Eigen::VectorXd theta;
  MeanField mu;
};

/// Everything computed at one state before the update is applied.
struct StepReport {
  TraceRow row;
  JointVector delta;
  /// <grad q_hat, delta> - eta ||grad q_hat||^2; nonnegative by construction.
  double barrier_slack = 0.0;
  double gq_norm_sq = 0.0;
  /// Inner-loop output at this state.
  std::optional<MeanField> mu_K;
};

/// Evaluates the step quantities at `state` without moving it.
StepReport evaluate_step(const OuterState& state, const Graph& g, const ModelSpec& spec, const OuterConfig& cfg,
                         int t);
/// Evaluates at `state`, then applies theta -= xi delta_theta and
/// mu = proj(base - xi delta_mu) with base = mu_K or mu_t per cfg.mu_base.
/// Throws NumericError on a non-finite delta.
StepReport outer_step(OuterState& state, const Graph& g, const ModelSpec& spec, const OuterConfig& cfg, int t);

/// T outer steps from (theta0, uniform random mu0). The trace holds T + 1
/// rows, row t describing the state before step t. A numeric failure stops
/// the run, sets flags["nonfinite"] and keeps the partial trace.
EstimationResult vrbea_estimate(const Graph& g, const ModelSpec& spec, const OuterConfig& cfg);

}  // namespace vrbea
