#pragma once

// Comparison estimators: Mele-Zhu fixed-point mean field with quasi-Newton
// outer updates, maximum pseudo-likelihood, and MCMC maximum likelihood.

#include "vrbea/estimation.hpp"
#include "vrbea/meanfield.hpp"
#include "vrbea/model.hpp"
#include "vrbea/sampler.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace vrbea {

// ---------------------------------------------------------------- Mele-Zhu

struct MzConfig {
  double eps_tol = 1e-8;
  int K_starts = 10;
  /// Stop when |diff| < eps_tol instead of the signed diff < eps_tol.
  bool abs_diff = false;
  int inner_max_iter = 1000;
  int outer_max_iter = 100;
  /// Gradient infinity-norm tolerance of the quasi-Newton loop.
  double outer_tol = 1e-6;
  /// Relative objective reduction below which the loop stops.
  double rel_tol = 1e-12;
  double armijo_c = 1e-4;
  int max_backtracks = 30;
  double zeta = 1e-6;
  Eigen::VectorXd theta0;
  std::uint64_t seed = 0;

  void validate(const ModelSpec& spec) const;
};

struct MzInnerResult {
  MeanField mu;
  /// Passes after the first whose stop test failed, i.e. passes - 1.
  int iterations = 0;
  /// psi^MF at mu_0, mu_1, ...
  std::vector<double> psi_trace;
};

/// mu_ij <- sigmoid(theta_1 + (theta_2 / n) sum_k mu_jk mu_ki) until the
/// stop test on diff = psi_{t+1} - psi_t fires or the cap is reached.
/// Requires the edge-triangle spec.
MzInnerResult mz_fixed_point_inner(const Eigen::VectorXd& theta, const MeanField& mu0, const MzConfig& cfg);

struct MzPsi {
  double psi = 0.0;
  MeanField mu;
  std::vector<int> iterations;  // per start
};

/// Best psi^MF over cfg.K_starts uniform starts. Start k draws from
/// derive_seed(cfg.seed, k, 0), so the value is a deterministic function of theta.
MzPsi mz_multistart_psi(const Eigen::VectorXd& theta, int n, const MzConfig& cfg);

/// Maximizes T_n(theta | g) - psi_bar(theta) by BFGS with Armijo
/// backtracking, using the gradient (S(g) - S(mu_bar)) / n^2.
EstimationResult mz_estimate(const Graph& g, const ModelSpec& spec, const MzConfig& cfg);

// ------------------------------------------------------------------- MPLE

struct MpleConfig {
  int newton_max_iter = 100;
  double newton_tol = 1e-10;
  double ridge = 1e-10;
  /// |theta_k| beyond this marks the fit as separated.
  double divergence_bound = 1e3;

  void validate() const;
};

/// S(g with ij present) - S(g with ij absent).
Eigen::VectorXd mple_change_stats(const Graph& g, int i, int j, const ModelSpec& spec);
double pseudo_loglik(const Eigen::VectorXd& theta, const Graph& g, const ModelSpec& spec);
EstimationResult mple_estimate(const Graph& g, const ModelSpec& spec, const MpleConfig& cfg);

// --------------------------------------------------------------- MCMC-MLE

struct McmcMleConfig {
  /// Toggles before the first sample; negative selects 20 sweeps of C(n,2).
  long long burn_in = -1;
  /// Toggles between samples; negative selects one sweep of C(n,2).
  long long thinning = -1;
  int M = 500;
  double step = 1.0;
  double tol = 1e-3;
  int max_iter = 20;
  double ridge = 1e-8;
  /// Step halvings allowed when the sample at the proposed value is degenerate.
  int max_halvings = 10;
  Eigen::VectorXd theta0;
  std::uint64_t seed = 0;

  void validate(const ModelSpec& spec) const;
};

struct ScoreEstimate {
  Eigen::VectorXd score;  // S(g) - mean sampled S
  Eigen::MatrixXd cov;    // sample covariance of S
  Eigen::VectorXd mean;
  double extreme_fraction = 0.0;
};

/// Draws cfg.M thinned states from a chain started at g under theta.
ScoreEstimate mcmc_score(const Eigen::VectorXd& theta, const Graph& g, const ModelSpec& spec,
                         const McmcMleConfig& cfg, std::uint64_t seed);

/// theta <- theta + a (Cov + ridge I)^-1 (S(g) - mean), the Newton step on
/// the log-likelihood whose Hessian is -Cov.
EstimationResult mcmc_mle_estimate(const Graph& g, const ModelSpec& spec, const McmcMleConfig& cfg);

}  // namespace vrbea
