#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace vrbea {

/// Undirected simple graph on nodes 0..n-1 with bit-packed adjacency rows.
///
/// Symmetry and the empty diagonal are maintained by every mutator, so a
/// Graph is always a valid element of the graph space.
class Graph {
 public:
  explicit Graph(int n);

  /// Builds a graph from a dense 0/1 matrix; throws ConfigError when the
  /// matrix is not square, symmetric, binary, or has a nonzero diagonal.
  static Graph from_matrix(const Eigen::MatrixXd& adj);
  static Graph complete(int n);

  int size() const { return n_; }
  bool has_edge(int i, int j) const;
  void set_edge(int i, int j, bool on);
  void toggle(int i, int j) { set_edge(i, j, !has_edge(i, j)); }

  int degree(int i) const { return degree_[i]; }
  int common_neighbors(int i, int j) const;
  /// Number of undirected edges.
  long edge_count() const;
  /// Number of undirected triangles.
  long triangle_count() const;
  double density() const;

  Eigen::MatrixXd to_matrix() const;

  bool operator==(const Graph& other) const {
    return n_ == other.n_ && bits_ == other.bits_;
  }

 private:
  const std::uint64_t* row(int i) const { return bits_.data() + static_cast<std::size_t>(i) * words_; }

  int n_;
  int words_;
  std::vector<std::uint64_t> bits_;
  std::vector<int> degree_;
};

/// Symmetric link-probability matrix with zero diagonal and off-diagonal
/// entries in [zeta, 1 - zeta].
class MeanField {
 public:
  /// Throws DomainError if `mu` violates the invariants.
  MeanField(Eigen::MatrixXd mu, double zeta);

  static MeanField uniform(int n, double value, double zeta);

  int size() const { return static_cast<int>(mu_.rows()); }
  double zeta() const { return zeta_; }
  const Eigen::MatrixXd& values() const { return mu_; }
  double operator()(int i, int j) const { return mu_(i, j); }

 private:
  Eigen::MatrixXd mu_;
  double zeta_;
};

enum class StatKind { edges, two_stars, triangles, dyadic_covariate };

StatKind parse_stat_kind(std::string_view name);
std::string_view to_string(StatKind kind);

/// Ordered list of sufficient statistics defining an ERGM.
///
/// `covariate` is the symmetric dyadic matrix z used by the
/// dyadic_covariate statistic and must be empty otherwise.
struct ModelSpec {
  std::vector<StatKind> kinds;
  Eigen::MatrixXd covariate;

  static ModelSpec edge_triangle();
  /// Parses a comma separated list such as "edges,triangles".
  static ModelSpec parse(std::string_view list);

  int dim() const { return static_cast<int>(kinds.size()); }
  bool has(StatKind kind) const;
  bool is_edge_triangle() const;
  std::string to_string() const;

  /// Throws ConfigError when the spec cannot be evaluated on n nodes.
  void validate(int n) const;
};

/// Checks a parameter vector against a spec; throws ConfigError on
/// dimension mismatch or DomainError on non-finite entries.
void check_theta(const Eigen::VectorXd& theta, const ModelSpec& spec);

/// Parses "a,b,c" into a vector of doubles.
Eigen::VectorXd parse_vector(std::string_view list);

}  // namespace vrbea
