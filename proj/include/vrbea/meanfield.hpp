#pragma once

// Mean-field lower-level problem.
//
//   H_n(mu)       = (1/2n^2) sum_{i != j} [mu log mu + (1 - mu) log(1 - mu)]
//   Gamma_n       = T_n(theta | mu) - H_n(mu)
//   f^eps(theta,mu) = -Gamma_n + (eps / 2n^2) ||mu||_F^2
//
// The lower level is minimised over U_zeta by projected gradient descent.

#include "vrbea/model.hpp"
#include "vrbea/rng.hpp"

#include <Eigen/Dense>

#include <vector>

namespace vrbea {

struct LowerLevelConfig {
  double epsilon = 1e-2;
  double zeta = 1e-6;
  /// Raw inner step size (no n^2 scaling applied here).
  double alpha = 5.0;
  int K = 10;
  /// Evaluate f at every inner iterate (costs one extra log pass per step).
  bool record_objective = false;

  void validate() const;
};

struct InnerTrace {
  /// f^eps at mu^(0..K); empty unless LowerLevelConfig::record_objective.
  std::vector<double> objective;
  /// ||G_alpha(mu^(k))|| over the tied variables, k = 0..K-1.
  std::vector<double> grad_map_norm;
  int steps = 0;

  /// objective[k] - objective.back().
  std::vector<double> gaps() const;
};

struct InnerResult {
  MeanField mu;
  InnerTrace trace;
};

/// Value and gradient of f^eps sharing one pass over mu.
struct LowerEvaluation {
  double value = 0.0;
  Eigen::MatrixXd grad;   // empty unless requested
  Eigen::VectorXd stats;  // S(mu)
};

double entropy_Hn(const MeanField& mu);
double gamma_n(const Eigen::VectorXd& theta, const MeanField& mu, const ModelSpec& spec);
double f_lower(const Eigen::VectorXd& theta, const MeanField& mu, const ModelSpec& spec, double epsilon);
Eigen::MatrixXd grad_f_lower_mu(const Eigen::VectorXd& theta, const MeanField& mu, const ModelSpec& spec,
                                double epsilon);
LowerEvaluation evaluate_lower(const Eigen::VectorXd& theta, const MeanField& mu, const ModelSpec& spec,
                               double epsilon, bool want_value, bool want_grad);

/// Euclidean projection onto U_zeta: symmetrise, clamp, zero the diagonal.
MeanField project_U(const Eigen::MatrixXd& raw, double zeta);

/// Exactly cfg.K projected gradient steps with fixed step cfg.alpha.
/// Throws NumericError on a non-finite gradient or objective.
InnerResult inner_loop(const Eigen::VectorXd& theta, const MeanField& mu0, const ModelSpec& spec,
                       const LowerLevelConfig& cfg);

/// Hessian of f^eps over the C(n,2) tied variables, pairs in row-major
/// upper-triangle order.
Eigen::MatrixXd tied_hessian(const Eigen::VectorXd& theta, const MeanField& mu, const ModelSpec& spec,
                             double epsilon);
/// Hessian applied to a symmetric zero-diagonal direction.
Eigen::MatrixXd hessian_vector_product(const Eigen::VectorXd& theta, const MeanField& mu,
                                       const ModelSpec& spec, double epsilon, const Eigen::MatrixXd& v);
/// Smallest eigenvalue of tied_hessian. Dense solve for n <= 60, shifted
/// power iteration above.
double min_eig_hessian_estimate(const Eigen::VectorXd& theta, const MeanField& mu, const ModelSpec& spec,
                                double epsilon);
/// Gershgorin bound (max absolute row sum) of tied_hessian at mu.
double lipschitz_estimate(const Eigen::VectorXd& theta, const MeanField& mu, const ModelSpec& spec,
                          double epsilon);

/// Upper-triangle entries drawn from U[0,1], mirrored, then projected.
MeanField random_meanfield(int n, double zeta, Rng& rng);

/// Inner product over the tied variables (upper triangle) of two symmetric
/// matrices.
double pair_dot(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace vrbea
