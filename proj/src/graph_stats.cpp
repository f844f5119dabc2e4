#include "vrbea/graph_stats.hpp"

#include "vrbea/errors.hpp"

#include <fmt/format.h>

namespace vrbea {

namespace {

double node_count(const Eigen::MatrixXd& m) { return static_cast<double>(m.rows()); }

double two_stars_from_rows(const Eigen::MatrixXd& m, const Eigen::VectorXd& row_sums) {
  // sum_{j<k} m_ij m_ik = (r_i^2 - sum_j m_ij^2) / 2
  const double pairs = 0.5 * (row_sums.squaredNorm() - m.squaredNorm());
  return pairs / node_count(m);
}

double triangles_from_square(const Eigen::MatrixXd& m, const Eigen::MatrixXd& square) {
  // trace(m^3) = sum_ij (m^2)_ij m_ji
  return square.cwiseProduct(m.transpose()).sum() / (6.0 * node_count(m));
}

}  // namespace

double stat_edges(const Eigen::MatrixXd& m) { return m.sum() - m.diagonal().sum(); }

double stat_two_stars(const Eigen::MatrixXd& m) {
  return two_stars_from_rows(m, m.rowwise().sum());
}

double stat_triangles(const Eigen::MatrixXd& m) {
  const Eigen::MatrixXd square = m * m;
  return triangles_from_square(m, square);
}

double stat_dyadic_covariate(const Eigen::MatrixXd& m, const Eigen::MatrixXd& z) {
  return m.cwiseProduct(z).sum() - m.diagonal().cwiseProduct(z.diagonal()).sum();
}

MatrixCache::MatrixCache(const Eigen::MatrixXd& matrix, const ModelSpec& spec) : m(matrix) {
  if (spec.has(StatKind::triangles)) square.noalias() = m * m;
  if (spec.has(StatKind::two_stars)) row_sums = m.rowwise().sum();
}

Eigen::VectorXd stats_vector(const MatrixCache& cache, const ModelSpec& spec) {
  if (spec.kinds.empty()) throw ConfigError("model spec is empty");
  Eigen::VectorXd s(spec.dim());
  for (int k = 0; k < spec.dim(); ++k) {
    switch (spec.kinds[k]) {
      case StatKind::edges: s[k] = stat_edges(cache.m); break;
      case StatKind::two_stars: s[k] = two_stars_from_rows(cache.m, cache.row_sums); break;
      case StatKind::triangles: s[k] = triangles_from_square(cache.m, cache.square); break;
      case StatKind::dyadic_covariate: s[k] = stat_dyadic_covariate(cache.m, spec.covariate); break;
    }
  }
  return s;
}

Eigen::VectorXd stats_vector(const Eigen::MatrixXd& m, const ModelSpec& spec) {
  return stats_vector(MatrixCache(m, spec), spec);
}

Eigen::VectorXd stats_vector(const MeanField& mu, const ModelSpec& spec) {
  return stats_vector(mu.values(), spec);
}

Eigen::VectorXd stats_vector(const Graph& g, const ModelSpec& spec) {
  if (spec.kinds.empty()) throw ConfigError("model spec is empty");
  const int n = g.size();
  Eigen::VectorXd s(spec.dim());
  for (int k = 0; k < spec.dim(); ++k) {
    switch (spec.kinds[k]) {
      case StatKind::edges: s[k] = 2.0 * static_cast<double>(g.edge_count()); break;
      case StatKind::two_stars: {
        double pairs = 0.0;
        for (int i = 0; i < n; ++i) pairs += 0.5 * g.degree(i) * (g.degree(i) - 1.0);
        s[k] = pairs / n;
        break;
      }
      case StatKind::triangles: s[k] = static_cast<double>(g.triangle_count()) / n; break;
      case StatKind::dyadic_covariate: {
        double sum = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j)
            if (g.has_edge(i, j)) sum += spec.covariate(i, j) + spec.covariate(j, i);
        s[k] = sum;
        break;
      }
    }
  }
  return s;
}

double potential(const Eigen::VectorXd& theta, const Graph& g, const ModelSpec& spec) {
  check_theta(theta, spec);
  return theta.dot(stats_vector(g, spec));
}

double potential(const Eigen::VectorXd& theta, const MeanField& mu, const ModelSpec& spec) {
  check_theta(theta, spec);
  return theta.dot(stats_vector(mu, spec));
}

double scaled_potential(const Eigen::VectorXd& theta, const Graph& g, const ModelSpec& spec) {
  const double n = g.size();
  return potential(theta, g, spec) / (n * n);
}

double scaled_potential(const Eigen::VectorXd& theta, const MeanField& mu, const ModelSpec& spec) {
  const double n = mu.size();
  return potential(theta, mu, spec) / (n * n);
}

namespace {

// Tied derivative of a single statistic, accumulated with weight w into out.
void add_stat_gradient(StatKind kind, double w, const MatrixCache& cache, const ModelSpec& spec,
                       Eigen::MatrixXd& out) {
  const Eigen::MatrixXd& m = cache.m;
  const double n = node_count(m);
  switch (kind) {
    case StatKind::edges: out.array() += 2.0 * w; break;
    case StatKind::two_stars: {
      // (1/n) [(r_i - m_ij) + (r_j - m_ij)]
      const Eigen::VectorXd& r = cache.row_sums;
      out += (w / n) * ((r.replicate(1, m.cols()) + r.transpose().replicate(m.rows(), 1)) - 2.0 * m);
      break;
    }
    case StatKind::triangles: out += (w / n) * cache.square; break;
    case StatKind::dyadic_covariate: out += (2.0 * w) * spec.covariate; break;
  }
}

}  // namespace

std::vector<Eigen::MatrixXd> stats_gradient_mu(const MeanField& mu, const ModelSpec& spec) {
  const MatrixCache cache(mu.values(), spec);
  const int n = mu.size();
  std::vector<Eigen::MatrixXd> out;
  out.reserve(spec.kinds.size());
  for (StatKind kind : spec.kinds) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
    add_stat_gradient(kind, 1.0, cache, spec, g);
    g.diagonal().setZero();
    out.push_back(std::move(g));
  }
  return out;
}

Eigen::MatrixXd potential_gradient_mu(const Eigen::VectorXd& theta, const MatrixCache& cache,
                                      const ModelSpec& spec) {
  const Eigen::Index n = cache.m.rows();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < spec.dim(); ++k) add_stat_gradient(spec.kinds[k], theta[k], cache, spec, g);
  g.diagonal().setZero();
  return g;
}

Eigen::VectorXd change_stats(const Graph& g, int i, int j, const ModelSpec& spec) {
  if (i == j) throw DomainError("change statistics need two distinct nodes");
  const int n = g.size();
  const bool present = g.has_edge(i, j);
  Eigen::VectorXd d(spec.dim());
  for (int k = 0; k < spec.dim(); ++k) {
    switch (spec.kinds[k]) {
      case StatKind::edges: d[k] = 2.0; break;
      case StatKind::two_stars: {
        const int di = g.degree(i) - (present ? 1 : 0);
        const int dj = g.degree(j) - (present ? 1 : 0);
        d[k] = static_cast<double>(di + dj) / n;
        break;
      }
      case StatKind::triangles: d[k] = static_cast<double>(g.common_neighbors(i, j)) / n; break;
      case StatKind::dyadic_covariate: d[k] = spec.covariate(i, j) + spec.covariate(j, i); break;
    }
  }
  return d;
}

}  // namespace vrbea
