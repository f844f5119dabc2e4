#include "oracles.hpp"

#include "vrbea/errors.hpp"
#include "vrbea/graph_stats.hpp"
#include "vrbea/meanfield.hpp"

#include <doctest.h>

#include <cmath>

using namespace vrbea;

namespace {

constexpr double kZeta = 1e-6;

MeanField constant_field(int n, double v) { return MeanField::uniform(n, v, kZeta); }

// Direct transcription of f^eps from its definition.
double f_reference(const Eigen::VectorXd& theta, const Eigen::MatrixXd& mu, const ModelSpec& spec, double eps) {
  const double n2 = static_cast<double>(mu.rows()) * mu.rows();
  return -theta.dot(oracle::stats(mu, spec)) / n2 + oracle::entropy(mu) + eps / (2.0 * n2) * mu.squaredNorm();
}

}  // namespace

TEST_CASE("entropy closed forms") {
  CHECK(entropy_Hn(constant_field(2, 0.5)) == doctest::Approx(-std::log(2.0) / 4.0).epsilon(1e-14));
  CHECK(std::abs(entropy_Hn(MeanField::uniform(5, 1e-12, 1e-12))) < 1e-9);
  Rng rng(1);
  const Eigen::MatrixXd mu = oracle::random_interior(7, 0.01, 0.99, rng);
  CHECK(entropy_Hn(MeanField(mu, kZeta)) == doctest::Approx(oracle::entropy(mu)).epsilon(1e-13));
}

TEST_CASE("gamma and f_lower examples") {
  const ModelSpec spec = ModelSpec::edge_triangle();
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
  const MeanField half = constant_field(3, 0.5);
  CHECK(gamma_n(zero, half, spec) == doctest::Approx(6.0 * std::log(2.0) / 18.0).epsilon(1e-14));
  CHECK(f_lower(zero, half, spec, 0.0) == doctest::Approx(-gamma_n(zero, half, spec)).epsilon(1e-14));
  CHECK(f_lower(zero, half, spec, 0.01) ==
        doctest::Approx(-6.0 * std::log(2.0) / 18.0 + 0.01 / 18.0 * 1.5).epsilon(1e-14));
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const MeanField mu(oracle::random_interior(5, 0.01, 0.99, rng), kZeta);
    const Eigen::VectorXd theta = oracle::random_theta(2, 2.0, rng);
    CHECK(f_lower(theta, mu, spec, 0.5) >= -gamma_n(theta, mu, spec));
    CHECK(f_lower(theta, mu, spec, 0.5) ==
          doctest::Approx(f_reference(theta, mu.values(), spec, 0.5)).epsilon(1e-12));
  }
}

TEST_CASE("lower gradient matches tied finite differences") {
  Rng rng(3);
  const double eps_grid[] = {0.0, 1e-2, 1.0};
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + trial % 6;
    const ModelSpec spec = trial % 2 ? ModelSpec::edge_triangle() : ModelSpec::parse("edges,two_stars,triangles");
    const Eigen::VectorXd theta = oracle::random_theta(spec.dim(), 2.0, rng);
    const double eps = eps_grid[trial % 3];
    const Eigen::MatrixXd mu = oracle::random_interior(n, 0.05, 0.95, rng);
    const auto f = [&](const Eigen::MatrixXd& m) { return f_reference(theta, m, spec, eps); };
    const Eigen::MatrixXd g = grad_f_lower_mu(theta, MeanField(mu, kZeta), spec, eps);
    CHECK(oracle::rel_error(g, oracle::fd_gradient_tied(f, mu)) < 1e-6);
    const LowerEvaluation ev = evaluate_lower(theta, MeanField(mu, kZeta), spec, eps, true, true);
    CHECK(ev.value == doctest::Approx(f(mu)).epsilon(1e-12));
    CHECK(oracle::rel_error(ev.grad, g) < 1e-14);
  }
}

TEST_CASE("lower gradient special cases") {
  const ModelSpec spec = ModelSpec::edge_triangle();
  CHECK(grad_f_lower_mu(Eigen::VectorXd::Zero(2), constant_field(5, 0.5), spec, 0.0).cwiseAbs().maxCoeff() < 1e-15);
  // Tied edge derivative is 2 per pair, so the entry is -2 theta_1 / n^2.
  const ModelSpec edges = ModelSpec::parse("edges");
  Eigen::VectorXd t(1);
  t << -1.0;
  const Eigen::MatrixXd g = grad_f_lower_mu(t, constant_field(4, 0.5), edges, 0.0);
  CHECK(g(0, 1) == doctest::Approx(2.0 / 16.0));
  CHECK(g(2, 2) == 0.0);
}

TEST_CASE("projection onto U_zeta") {
  Rng rng(4);
  const Eigen::MatrixXd feasible = oracle::random_interior(6, 0.1, 0.9, rng);
  CHECK(project_U(feasible, kZeta).values() == feasible);
  Eigen::MatrixXd raw = Eigen::MatrixXd::Zero(3, 3);
  raw(0, 1) = 0.2;
  raw(1, 0) = 0.4;
  raw(0, 2) = raw(2, 0) = 1.7;
  raw(1, 2) = raw(2, 1) = -3.0;
  raw(1, 1) = 0.5;
  const MeanField p = project_U(raw, kZeta);
  CHECK(p(0, 1) == doctest::Approx(0.3));
  CHECK(p(1, 0) == doctest::Approx(0.3));
  CHECK(p(0, 2) == 1.0 - kZeta);
  CHECK(p(1, 2) == kZeta);
  CHECK(p(1, 1) == 0.0);
  CHECK(project_U(p.values(), kZeta).values() == p.values());
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd a = oracle::random_interior(6, -1.0, 2.0, rng);
    const Eigen::MatrixXd b = oracle::random_interior(6, -1.0, 2.0, rng);
    CHECK((project_U(a, kZeta).values() - project_U(b, kZeta).values()).norm() <= (a - b).norm() + 1e-15);
  }
}

TEST_CASE("inner loop") {
  const ModelSpec spec = ModelSpec::edge_triangle();
  Rng rng(5);
  SUBCASE("one step matches the projected gradient formula") {
    LowerLevelConfig cfg;
    cfg.K = 1;
    const Eigen::VectorXd theta = parse_vector("-1,1");
    const MeanField mu0 = random_meanfield(6, kZeta, rng);
    const Eigen::MatrixXd expect =
        project_U(mu0.values() - cfg.alpha * grad_f_lower_mu(theta, mu0, spec, cfg.epsilon), kZeta).values();
    CHECK(inner_loop(theta, mu0, spec, cfg).mu.values() == expect);
  }
  SUBCASE("theta = 0 moves toward one half") {
    LowerLevelConfig cfg;
    cfg.epsilon = 0.0;
    cfg.K = 50;
    cfg.alpha = 0.002 * 64;
    const MeanField mu0(oracle::random_interior(8, 0.05, 0.95, rng), kZeta);
    const Eigen::MatrixXd half = constant_field(8, 0.5).values();
    const InnerResult r = inner_loop(Eigen::VectorXd::Zero(2), mu0, spec, cfg);
    CHECK((r.mu.values() - half).norm() < (mu0.values() - half).norm());
  }
  SUBCASE("objective is non-increasing") {
    // 1/L at one half bounds the curvature only while the optimum stays near one half.
    const auto descends = [&](const Eigen::VectorXd& theta, int n, double alpha) {
      LowerLevelConfig cfg;
      cfg.epsilon = 1e-2;
      cfg.K = 30;
      cfg.alpha = alpha;
      cfg.record_objective = true;
      const InnerResult r = inner_loop(theta, constant_field(n, 0.5), spec, cfg);
      REQUIRE(r.trace.objective.size() == 31);
      const Eigen::MatrixXd& m = r.mu.values();
      CHECK(m.maxCoeff() <= 1.0 - kZeta);
      CHECK((m + Eigen::MatrixXd::Identity(n, n)).minCoeff() >= kZeta);
      for (std::size_t k = 1; k < r.trace.objective.size(); ++k) {
        const double prev = r.trace.objective[k - 1];
        if (r.trace.objective[k] > prev + 1e-12 * (1.0 + std::abs(prev))) return false;
      }
      return true;
    };
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 4 + trial % 10;
      const Eigen::VectorXd weak = oracle::random_theta(2, 0.5, rng);
      CHECK(descends(weak, n, 1.0 / lipschitz_estimate(weak, constant_field(n, 0.5), spec, 1e-2)));
      CHECK(descends(oracle::random_theta(2, 2.0, rng), n, 0.002 * n * n));
    }
    // A strong edge parameter pushes the 1/L step past the box and the iterates cycle between corners.
    const Eigen::VectorXd strong = parse_vector("-1.3,0.2");
    CHECK_FALSE(descends(strong, 9, 1.0 / lipschitz_estimate(strong, constant_field(9, 0.5), spec, 1e-2)));
  }
  SUBCASE("config validation") {
    LowerLevelConfig cfg;
    cfg.alpha = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = LowerLevelConfig{};
    cfg.epsilon = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = LowerLevelConfig{};
    cfg.K = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
}

TEST_CASE("hessian against finite differences of the gradient") {
  Rng rng(6);
  const ModelSpec spec = ModelSpec::edge_triangle();
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 3 + trial;
    const Eigen::VectorXd theta = oracle::random_theta(2, 2.0, rng);
    const Eigen::MatrixXd mu = oracle::random_interior(n, 0.1, 0.9, rng);
    const double eps = 0.3;
    const Eigen::MatrixXd H = tied_hessian(theta, MeanField(mu, kZeta), spec, eps);
    const int P = n * (n - 1) / 2;
    REQUIRE(H.rows() == P);
    Eigen::MatrixXd fd(P, P);
    const double h = 1e-6;
    int col = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j, ++col) {
        Eigen::MatrixXd p = mu, m = mu;
        p(i, j) += h;
        p(j, i) += h;
        m(i, j) -= h;
        m(j, i) -= h;
        const Eigen::MatrixXd d = (grad_f_lower_mu(theta, MeanField(p, kZeta), spec, eps) -
                                   grad_f_lower_mu(theta, MeanField(m, kZeta), spec, eps)) /
                                  (2.0 * h);
        int row = 0;
        for (int a = 0; a < n; ++a)
          for (int b = a + 1; b < n; ++b, ++row) fd(row, col) = d(a, b);
      }
    CHECK(oracle::rel_error(H, fd) < 1e-6);

    const Eigen::MatrixXd v = oracle::random_interior(n, -1.0, 1.0, rng);
    Eigen::VectorXd vp(P);
    int k = 0;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) vp[k++] = v(a, b);
    const Eigen::VectorXd hv = H * vp;
    const Eigen::MatrixXd hvm = hessian_vector_product(theta, MeanField(mu, kZeta), spec, eps, v);
    k = 0;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) CHECK(hvm(a, b) == doctest::Approx(hv[k++]).epsilon(1e-10));
  }
}

TEST_CASE("minimum eigenvalue diagnostic") {
  const ModelSpec spec = ModelSpec::edge_triangle();
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
  const MeanField half = constant_field(6, 0.5);
  // Pure entropy: 1/(mu(1-mu)) per tied pair, scaled by 1/n^2.
  CHECK(min_eig_hessian_estimate(zero, half, spec, 0.0) == doctest::Approx(4.0 / 36.0).epsilon(1e-10));
  const double shift = min_eig_hessian_estimate(zero, half, spec, 0.5) - min_eig_hessian_estimate(zero, half, spec, 0.0);
  CHECK(shift == doctest::Approx(2.0 * 0.5 / 36.0).epsilon(1e-10));

  // Power iteration path (n > 60) agrees with the dense solve of the same Hessian.
  Rng rng(7);
  const int n = 64;
  const Eigen::VectorXd theta = parse_vector("-1,1");
  const MeanField mu = random_meanfield(n, kZeta, rng);
  const Eigen::MatrixXd clipped =
      mu.values().cwiseMax(0.05).cwiseMin(0.95) - 0.05 * Eigen::MatrixXd::Identity(n, n);
  const MeanField interior(clipped, kZeta);
  const double approx = min_eig_hessian_estimate(theta, interior, spec, 0.01);
  const double exact = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(tied_hessian(theta, interior, spec, 0.01),
                                                                      Eigen::EigenvaluesOnly)
                           .eigenvalues()
                           .minCoeff();
  CHECK(approx == doctest::Approx(exact).epsilon(1e-3));
}

TEST_CASE("pair inner product and random start") {
  Rng rng(8);
  const Eigen::MatrixXd a = oracle::random_interior(5, -1.0, 1.0, rng);
  const Eigen::MatrixXd b = oracle::random_interior(5, -1.0, 1.0, rng);
  CHECK(pair_dot(a, b) == doctest::Approx(0.5 * (a.array() * b.array()).sum()).epsilon(1e-14));
  const MeanField mu = random_meanfield(10, kZeta, rng);
  CHECK(mu.size() == 10);
  CHECK(mu.values().isApprox(mu.values().transpose()));
}
