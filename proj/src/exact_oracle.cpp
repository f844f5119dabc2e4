#include "vrbea/exact_oracle.hpp"

#include "vrbea/errors.hpp"
#include "vrbea/graph_stats.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <thread>

namespace vrbea {

namespace {

int pair_count(int n) { return n * (n - 1) / 2; }

void check_size(int n) {
  if (n < 1 || n > kMaxExactNodes)
    throw ConfigError(fmt::format("exact enumeration supports 1 <= n <= {}, got {}", kMaxExactNodes, n));
}

}  // namespace

Graph graph_from_index(int n, std::uint64_t index) {
  Graph g(n);
  int b = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++b)
      if ((index >> b) & 1ULL) g.set_edge(i, j, true);
  return g;
}

std::uint64_t index_of_graph(const Graph& g) {
  check_size(g.size());
  std::uint64_t index = 0;
  int b = 0;
  for (int i = 0; i < g.size(); ++i)
    for (int j = i + 1; j < g.size(); ++j, ++b)
      if (g.has_edge(i, j)) index |= 1ULL << b;
  return index;
}

ExactModel ExactModel::build(int n, const Eigen::VectorXd& theta, const ModelSpec& spec, int jobs) {
  check_size(n);
  spec.validate(n);
  check_theta(theta, spec);
  ExactModel m;
  m.n = n;
  m.spec = spec;
  m.theta = theta;
  const std::size_t count = std::size_t{1} << pair_count(n);
  m.potential.resize(count);

  const auto fill = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t b = lo; b < hi; ++b) m.potential[b] = vrbea::potential(theta, graph_from_index(n, b), spec);
  };
  const std::size_t workers = std::clamp<std::size_t>(jobs, 1, count);
  if (workers == 1) {
    fill(0, count);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(fill, count * w / workers, count * (w + 1) / workers);
    for (std::thread& t : pool) t.join();
  }

  const double top = *std::max_element(m.potential.begin(), m.potential.end());
  double sum = 0.0;
  for (double q : m.potential) sum += std::exp(q - top);
  m.log_partition = top + std::log(sum);
  m.prob.resize(count);
  for (std::size_t b = 0; b < count; ++b) m.prob[b] = std::exp(m.potential[b] - m.log_partition);
  return m;
}

double ExactModel::psi() const { return log_partition / (static_cast<double>(n) * n); }

Eigen::VectorXd ExactModel::mean_stats() const {
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(spec.dim());
  for (std::size_t b = 0; b < prob.size(); ++b) mean += prob[b] * stats_vector(graph_from_index(n, b), spec);
  return mean;
}

double exact_psi(const Eigen::VectorXd& theta, int n, const ModelSpec& spec) {
  return ExactModel::build(n, theta, spec).psi();
}

Eigen::VectorXd exact_mean_stats(const Eigen::VectorXd& theta, int n, const ModelSpec& spec) {
  return ExactModel::build(n, theta, spec).mean_stats();
}

double exact_loglik(const Eigen::VectorXd& theta, const Graph& g, const ModelSpec& spec) {
  return scaled_potential(theta, g, spec) - exact_psi(theta, g.size(), spec);
}

}  // namespace vrbea
