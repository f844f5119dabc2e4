#include "vrbea/model.hpp"

#include "vrbea/errors.hpp"

#include <fmt/format.h>

#include <bit>
#include <charconv>
#include <cmath>

namespace vrbea {

Graph::Graph(int n) : n_(n), words_((n + 63) / 64) {
  if (n < 1) throw ConfigError(fmt::format("graph needs at least one node, got {}", n));
  bits_.assign(static_cast<std::size_t>(n_) * words_, 0);
  degree_.assign(n_, 0);
}

Graph Graph::from_matrix(const Eigen::MatrixXd& adj) {
  if (adj.rows() != adj.cols() || adj.rows() == 0)
    throw ConfigError("adjacency matrix must be square and nonempty");
  const int n = static_cast<int>(adj.rows());
  Graph g(n);
  for (int i = 0; i < n; ++i) {
    if (adj(i, i) != 0.0) throw ConfigError(fmt::format("nonzero diagonal at node {}", i));
    for (int j = i + 1; j < n; ++j) {
      const double a = adj(i, j);
      if (a != adj(j, i)) throw ConfigError(fmt::format("asymmetric entry at ({}, {})", i, j));
      if (a != 0.0 && a != 1.0) throw ConfigError(fmt::format("non-binary entry at ({}, {})", i, j));
      if (a == 1.0) g.set_edge(i, j, true);
    }
  }
  return g;
}

Graph Graph::complete(int n) {
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.set_edge(i, j, true);
  return g;
}

bool Graph::has_edge(int i, int j) const {
  return (row(i)[j >> 6] >> (j & 63)) & 1ULL;
}

void Graph::set_edge(int i, int j, bool on) {
  if (i == j) throw DomainError("self loops are not allowed");
  if (has_edge(i, j) == on) return;
  const std::uint64_t bi = 1ULL << (i & 63);
  const std::uint64_t bj = 1ULL << (j & 63);
  bits_[static_cast<std::size_t>(i) * words_ + (j >> 6)] ^= bj;
  bits_[static_cast<std::size_t>(j) * words_ + (i >> 6)] ^= bi;
  const int d = on ? 1 : -1;
  degree_[i] += d;
  degree_[j] += d;
}

int Graph::common_neighbors(int i, int j) const {
  const std::uint64_t* a = row(i);
  const std::uint64_t* b = row(j);
  int c = 0;
  for (int w = 0; w < words_; ++w) c += std::popcount(a[w] & b[w]);
  return c;
}

long Graph::edge_count() const {
  long twice = 0;
  for (int d : degree_) twice += d;
  return twice / 2;
}

long Graph::triangle_count() const {
  long closed = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (has_edge(i, j)) closed += common_neighbors(i, j);
  return closed / 3;
}

double Graph::density() const {
  if (n_ < 2) return 0.0;
  return static_cast<double>(edge_count()) / (0.5 * n_ * (n_ - 1));
}

Eigen::MatrixXd Graph::to_matrix() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (i != j && has_edge(i, j)) m(i, j) = 1.0;
  return m;
}

MeanField::MeanField(Eigen::MatrixXd mu, double zeta) : mu_(std::move(mu)), zeta_(zeta) {
  if (!(zeta_ > 0.0 && zeta_ < 0.5)) throw DomainError(fmt::format("zeta must lie in (0, 0.5), got {}", zeta_));
  if (mu_.rows() != mu_.cols() || mu_.rows() == 0) throw DomainError("mean-field matrix must be square and nonempty");
  const Eigen::Index n = mu_.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (mu_(i, i) != 0.0) throw DomainError("mean-field diagonal must be zero");
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = mu_(i, j);
      if (v != mu_(j, i)) throw DomainError(fmt::format("mean-field asymmetric at ({}, {})", i, j));
      if (!(v >= zeta_ && v <= 1.0 - zeta_))
        throw DomainError(fmt::format("mean-field entry {} at ({}, {}) outside [zeta, 1 - zeta]", v, i, j));
    }
  }
}

MeanField MeanField::uniform(int n, double value, double zeta) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(n, n, value);
  m.diagonal().setZero();
  return MeanField(std::move(m), zeta);
}

StatKind parse_stat_kind(std::string_view name) {
  if (name == "edges") return StatKind::edges;
  if (name == "two_stars" || name == "twostars") return StatKind::two_stars;
  if (name == "triangles" || name == "triangle") return StatKind::triangles;
  if (name == "dyadic_covariate" || name == "covariate") return StatKind::dyadic_covariate;
  throw ConfigError(fmt::format("unknown statistic kind '{}'", name));
}

std::string_view to_string(StatKind kind) {
  switch (kind) {
    case StatKind::edges: return "edges";
    case StatKind::two_stars: return "two_stars";
    case StatKind::triangles: return "triangles";
    case StatKind::dyadic_covariate: return "dyadic_covariate";
  }
  return "?";
}

ModelSpec ModelSpec::edge_triangle() { return ModelSpec{{StatKind::edges, StatKind::triangles}, {}}; }

ModelSpec ModelSpec::parse(std::string_view list) {
  ModelSpec spec;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t end = std::min(list.find(',', start), list.size());
    std::string_view item = list.substr(start, end - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) spec.kinds.push_back(parse_stat_kind(item));
    start = end + 1;
  }
  if (spec.kinds.empty()) throw ConfigError("model spec is empty");
  return spec;
}

bool ModelSpec::has(StatKind kind) const {
  for (StatKind k : kinds)
    if (k == kind) return true;
  return false;
}

bool ModelSpec::is_edge_triangle() const {
  return kinds.size() == 2 && kinds[0] == StatKind::edges && kinds[1] == StatKind::triangles;
}

std::string ModelSpec::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    if (i) out += ',';
    out += vrbea::to_string(kinds[i]);
  }
  return out;
}

void ModelSpec::validate(int n) const {
  if (kinds.empty()) throw ConfigError("model spec is empty");
  if (has(StatKind::dyadic_covariate)) {
    if (covariate.rows() != n || covariate.cols() != n)
      throw ConfigError(fmt::format("dyadic covariate must be {0}x{0}", n));
    if ((covariate - covariate.transpose()).cwiseAbs().maxCoeff() != 0.0) throw ConfigError("dyadic covariate must be symmetric");
  }
}

void check_theta(const Eigen::VectorXd& theta, const ModelSpec& spec) {
  if (theta.size() != spec.dim())
    throw ConfigError(fmt::format("theta has {} entries but the spec has {} statistics", theta.size(), spec.dim()));
  if (!theta.allFinite()) throw DomainError("theta has non-finite entries");
}

Eigen::VectorXd parse_vector(std::string_view list) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t end = std::min(list.find(',', start), list.size());
    std::string_view item = list.substr(start, end - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
      if (ec != std::errc() || ptr != item.data() + item.size())
        throw ConfigError(fmt::format("cannot parse number '{}'", item));
      values.push_back(v);
    }
    start = end + 1;
  }
  return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace vrbea
