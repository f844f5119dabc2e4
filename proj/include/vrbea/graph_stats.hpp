#pragma once

// Sufficient statistics of the ERGM and the potential Q_n = <theta, S(m)>.
//
// Scalings are part of the statistics so the potential is a plain dot
// product:
//   edges      sum_{i != j} m_ij                      (each edge counted twice)
//   two_stars  (1/n)  sum_i sum_{j < k} m_ij m_ik
//   triangles  (1/6n) sum_{i,j,k} m_ij m_jk m_ki     (= #triangles / n on graphs)
//   covariate  sum_{i != j} z_ij m_ij
//
// Every function accepts either a 0/1 adjacency matrix or a mean-field
// matrix. Gradients with respect to mu treat mu_ij and mu_ji as one
// variable and are reported as full symmetric matrices with a zero diagonal.

#include "vrbea/model.hpp"

#include <Eigen/Dense>

#include <vector>

namespace vrbea {

double stat_edges(const Eigen::MatrixXd& m);
double stat_two_stars(const Eigen::MatrixXd& m);
double stat_triangles(const Eigen::MatrixXd& m);
double stat_dyadic_covariate(const Eigen::MatrixXd& m, const Eigen::MatrixXd& z);

/// Products of a matrix reused by several statistics and their gradients.
struct MatrixCache {
  MatrixCache(const Eigen::MatrixXd& m, const ModelSpec& spec);

  const Eigen::MatrixXd& m;
  Eigen::MatrixXd square;    // m * m, only when the spec has triangles
  Eigen::VectorXd row_sums;  // only when the spec has two-stars
};

Eigen::VectorXd stats_vector(const MatrixCache& cache, const ModelSpec& spec);
Eigen::VectorXd stats_vector(const Eigen::MatrixXd& m, const ModelSpec& spec);
Eigen::VectorXd stats_vector(const MeanField& mu, const ModelSpec& spec);
/// Exact statistics of a binary graph computed from counts.
Eigen::VectorXd stats_vector(const Graph& g, const ModelSpec& spec);

double potential(const Eigen::VectorXd& theta, const Graph& g, const ModelSpec& spec);
double potential(const Eigen::VectorXd& theta, const MeanField& mu, const ModelSpec& spec);

/// T_n = Q_n / n^2.
double scaled_potential(const Eigen::VectorXd& theta, const Graph& g, const ModelSpec& spec);
double scaled_potential(const Eigen::VectorXd& theta, const MeanField& mu, const ModelSpec& spec);

/// d S_k / d mu_ij for every statistic k (tied convention).
std::vector<Eigen::MatrixXd> stats_gradient_mu(const MeanField& mu, const ModelSpec& spec);

/// sum_k theta_k d S_k / d mu (tied convention).
Eigen::MatrixXd potential_gradient_mu(const Eigen::VectorXd& theta, const MatrixCache& cache,
                                      const ModelSpec& spec);

/// S(g with ij present) - S(g with ij absent), computed without a recount.
Eigen::VectorXd change_stats(const Graph& g, int i, int j, const ModelSpec& spec);

}  // namespace vrbea
