#include "vrbea/meanfield.hpp"

#include "vrbea/errors.hpp"
#include "vrbea/graph_stats.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace vrbea {

void LowerLevelConfig::validate() const {
  if (!(zeta > 0.0 && zeta < 0.5)) throw ConfigError(fmt::format("zeta must lie in (0, 0.5), got {}", zeta));
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
    throw ConfigError(fmt::format("epsilon must be finite and nonnegative, got {}", epsilon));
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError(fmt::format("alpha must be positive, got {}", alpha));
  if (K < 1) throw ConfigError(fmt::format("K must be at least 1, got {}", K));
}

std::vector<double> InnerTrace::gaps() const {
  std::vector<double> out;
  if (objective.empty()) return out;
  out.reserve(objective.size());
  for (double v : objective) out.push_back(v - objective.back());
  return out;
}

double pair_dot(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  double s = 0.0;
  const Eigen::Index n = a.rows();
  for (Eigen::Index j = 1; j < n; ++j)
    for (Eigen::Index i = 0; i < j; ++i) s += a(i, j) * b(i, j);
  return s;
}

namespace {

double entropy_sum(const Eigen::MatrixXd& mu) {
  // sum over i != j; the diagonal is zero and skipped.
  double s = 0.0;
  const Eigen::Index n = mu.rows();
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == j) continue;
      const double p = mu(i, j);
      if (!(p > 0.0 && p < 1.0)) throw DomainError(fmt::format("entropy undefined at mu = {}", p));
      s += p * std::log(p) + (1.0 - p) * std::log1p(-p);
    }
  return s;
}

}  // namespace

double entropy_Hn(const MeanField& mu) {
  const double n = mu.size();
  return entropy_sum(mu.values()) / (2.0 * n * n);
}

double gamma_n(const Eigen::VectorXd& theta, const MeanField& mu, const ModelSpec& spec) {
  return scaled_potential(theta, mu, spec) - entropy_Hn(mu);
}

LowerEvaluation evaluate_lower(const Eigen::VectorXd& theta, const MeanField& mu, const ModelSpec& spec,
                               double epsilon, bool want_value, bool want_grad) {
  check_theta(theta, spec);
  const Eigen::MatrixXd& m = mu.values();
  const double n2 = static_cast<double>(mu.size()) * mu.size();
  const MatrixCache cache(m, spec);
  LowerEvaluation out;
  out.stats = stats_vector(cache, spec);
  if (want_value) {
    const double potential = theta.dot(out.stats);
    out.value = (-potential + 0.5 * entropy_sum(m) + 0.5 * epsilon * m.squaredNorm()) / n2;
  }
  if (want_grad) {
    out.grad = -potential_gradient_mu(theta, cache, spec);
    const Eigen::Index n = m.rows();
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i) {
        if (i == j) continue;
        const double p = m(i, j);
        out.grad(i, j) += std::log(p) - std::log1p(-p) + 2.0 * epsilon * p;
      }
    out.grad /= n2;
  }
  return out;
}

double f_lower(const Eigen::VectorXd& theta, const MeanField& mu, const ModelSpec& spec, double epsilon) {
  return evaluate_lower(theta, mu, spec, epsilon, true, false).value;
}

Eigen::MatrixXd grad_f_lower_mu(const Eigen::VectorXd& theta, const MeanField& mu, const ModelSpec& spec,
                                double epsilon) {
  return evaluate_lower(theta, mu, spec, epsilon, false, true).grad;
}

MeanField project_U(const Eigen::MatrixXd& raw, double zeta) {
  if (raw.rows() != raw.cols()) throw DomainError("projection needs a square matrix");
  Eigen::MatrixXd m = 0.5 * (raw + raw.transpose());
  m = m.cwiseMax(zeta).cwiseMin(1.0 - zeta);
  m.diagonal().setZero();
  return MeanField(std::move(m), zeta);
}

InnerResult inner_loop(const Eigen::VectorXd& theta, const MeanField& mu0, const ModelSpec& spec,
                       const LowerLevelConfig& cfg) {
  cfg.validate();
  InnerResult result{mu0, {}};
  result.trace.grad_map_norm.reserve(cfg.K);
  for (int k = 0; k < cfg.K; ++k) {
    LowerEvaluation eval = evaluate_lower(theta, result.mu, spec, cfg.epsilon, cfg.record_objective, true);
    if (cfg.record_objective) {
      if (!std::isfinite(eval.value)) throw NumericError(fmt::format("non-finite lower objective at inner step {}", k));
      result.trace.objective.push_back(eval.value);
    }
    if (!eval.grad.allFinite()) throw NumericError(fmt::format("non-finite lower gradient at inner step {}", k));
    MeanField next = project_U(result.mu.values() - cfg.alpha * eval.grad, cfg.zeta);
    const Eigen::MatrixXd step = result.mu.values() - next.values();
    result.trace.grad_map_norm.push_back(std::sqrt(pair_dot(step, step)) / cfg.alpha);
    result.mu = std::move(next);
    ++result.trace.steps;
  }
  if (cfg.record_objective) {
    const double last = f_lower(theta, result.mu, spec, cfg.epsilon);
    if (!std::isfinite(last)) throw NumericError("non-finite lower objective after the inner loop");
    result.trace.objective.push_back(last);
  }
  return result;
}

namespace {

// Weights of the second-order polynomial couplings. Pairs (i,j) and (i,k)
// sharing node i interact through two-stars (1/n) and triangles (mu_jk / n).
struct Couplings {
  double two_star = 0.0;
  double triangle = 0.0;
};

Couplings couplings(const Eigen::VectorXd& theta, const ModelSpec& spec) {
  check_theta(theta, spec);
  Couplings c;
  for (int k = 0; k < spec.dim(); ++k) {
    if (spec.kinds[k] == StatKind::two_stars) c.two_star += theta[k];
    if (spec.kinds[k] == StatKind::triangles) c.triangle += theta[k];
  }
  return c;
}

double diagonal_term(double p, double epsilon) { return 1.0 / (p * (1.0 - p)) + 2.0 * epsilon; }

}  // namespace

Eigen::MatrixXd tied_hessian(const Eigen::VectorXd& theta, const MeanField& mu, const ModelSpec& spec,
                             double epsilon) {
  const Couplings c = couplings(theta, spec);
  const int n = mu.size();
  const double n2 = static_cast<double>(n) * n;
  const double dn = n;
  Eigen::MatrixXi index = Eigen::MatrixXi::Constant(n, n, -1);
  int pairs = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) index(i, j) = index(j, i) = pairs++;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(pairs, pairs);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) h(index(i, j), index(i, j)) = diagonal_term(mu(i, j), epsilon) / n2;
  if (c.two_star != 0.0 || c.triangle != 0.0) {
    for (int shared = 0; shared < n; ++shared)
      for (int j = 0; j < n; ++j) {
        if (j == shared) continue;
        for (int k = j + 1; k < n; ++k) {
          if (k == shared) continue;
          const double v = -(c.two_star / dn + c.triangle * mu(j, k) / dn) / n2;
          h(index(shared, j), index(shared, k)) += v;
          h(index(shared, k), index(shared, j)) += v;
        }
      }
  }
  return h;
}

Eigen::MatrixXd hessian_vector_product(const Eigen::VectorXd& theta, const MeanField& mu,
                                       const ModelSpec& spec, double epsilon, const Eigen::MatrixXd& v) {
  const Couplings c = couplings(theta, spec);
  const Eigen::MatrixXd& m = mu.values();
  const Eigen::Index n = m.rows();
  const double n2 = static_cast<double>(n) * n;
  const double dn = static_cast<double>(n);
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) out(i, j) = i == j ? 0.0 : diagonal_term(m(i, j), epsilon) * v(i, j);
  if (c.two_star != 0.0) {
    const Eigen::VectorXd r = v.rowwise().sum();
    out -= (c.two_star / dn) * ((r.replicate(1, n) + r.transpose().replicate(n, 1)) - 2.0 * v);
  }
  if (c.triangle != 0.0) out -= (c.triangle / dn) * (v * m + m * v);
  out.diagonal().setZero();
  return out / n2;
}

double lipschitz_estimate(const Eigen::VectorXd& theta, const MeanField& mu, const ModelSpec& spec,
                          double epsilon) {
  const Couplings c = couplings(theta, spec);
  const int n = mu.size();
  const double n2 = static_cast<double>(n) * n;
  const double dn = n;
  double best = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double row = std::abs(diagonal_term(mu(i, j), epsilon));
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        row += std::abs(c.two_star / dn + c.triangle * mu(j, k) / dn);
        row += std::abs(c.two_star / dn + c.triangle * mu(i, k) / dn);
      }
      best = std::max(best, row / n2);
    }
  return best;
}

double min_eig_hessian_estimate(const Eigen::VectorXd& theta, const MeanField& mu, const ModelSpec& spec,
                                double epsilon) {
  const int n = mu.size();
  if (n < 2) return 0.0;
  if (n <= 60) {
    const Eigen::MatrixXd h = tied_hessian(theta, mu, spec, epsilon);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
  }
  // Power iteration on (shift I - H) converges to shift - lambda_min.
  const double shift = lipschitz_estimate(theta, mu, spec, epsilon);
  Rng rng(0x5eedULL);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) v(i, j) = v(j, i) = unif(rng);
  v /= std::sqrt(pair_dot(v, v));
  double rayleigh = 0.0;
  for (int it = 0; it < 2000; ++it) {
    Eigen::MatrixXd w = shift * v - hessian_vector_product(theta, mu, spec, epsilon, v);
    const double next = pair_dot(v, w);
    const double norm = std::sqrt(pair_dot(w, w));
    if (norm == 0.0) break;
    v = w / norm;
    if (it > 10 && std::abs(next - rayleigh) <= 1e-12 * std::max(1.0, std::abs(next))) {
      rayleigh = next;
      break;
    }
    rayleigh = next;
  }
  return shift - rayleigh;
}

MeanField random_meanfield(int n, double zeta, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) m(i, j) = m(j, i) = unif(rng);
  return project_U(m, zeta);
}

}  // namespace vrbea
