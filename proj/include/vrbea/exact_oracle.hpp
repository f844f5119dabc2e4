#pragma once

// Brute-force enumeration of all graphs on n <= 6 nodes.
//
// Graph index b encodes the upper-triangle pairs in row-major order:
// bit 0 is (0,1), bit 1 is (0,2), ..., the last bit is (n-2,n-1).

#include "vrbea/model.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace vrbea {

inline constexpr int kMaxExactNodes = 6;

Graph graph_from_index(int n, std::uint64_t index);
std::uint64_t index_of_graph(const Graph& g);

struct ExactModel {
  int n = 0;
  ModelSpec spec;
  Eigen::VectorXd theta;
  /// Q(theta | w) for every graph index.
  std::vector<double> potential;
  /// Normalized probabilities, same indexing.
  std::vector<double> prob;
  /// log sum_w exp Q(theta | w), unscaled.
  double log_partition = 0.0;

  /// Throws ConfigError when n is outside [1, kMaxExactNodes]. `jobs` > 1
  /// splits the enumeration into contiguous index ranges.
  static ExactModel build(int n, const Eigen::VectorXd& theta, const ModelSpec& spec, int jobs = 1);

  double psi() const;
  Eigen::VectorXd mean_stats() const;
};

/// n^-2 log sum_w exp Q(theta | w).
double exact_psi(const Eigen::VectorXd& theta, int n, const ModelSpec& spec);
/// E_theta[S(W)] under the exact ERGM.
Eigen::VectorXd exact_mean_stats(const Eigen::VectorXd& theta, int n, const ModelSpec& spec);
/// T_n(theta | g) - psi_n(theta).
double exact_loglik(const Eigen::VectorXd& theta, const Graph& g, const ModelSpec& spec);

}  // namespace vrbea
