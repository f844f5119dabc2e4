#include "vrbea/sampler.hpp"

#include "vrbea/errors.hpp"
#include "vrbea/graph_stats.hpp"

#include <fmt/format.h>

#include <cmath>

namespace vrbea {

SamplerConfig SamplerConfig::resolved(int n, const Eigen::VectorXd& theta) const {
  SamplerConfig out = *this;
  if (out.burn_in < 0) out.burn_in = 100000LL * n;
  if (out.thinning < 0) out.thinning = 10LL * n;
  if (out.init_p < 0.0) out.init_p = theta.size() > 0 ? 1.0 / (1.0 + std::exp(-theta[0])) : 0.5;
  return out;
}

void SamplerConfig::validate() const {
  if (burn_in < 0 || thinning < 0 || count < 0)
    throw ConfigError(fmt::format("sampler counts must be nonnegative (burn_in {}, thinning {}, count {})", burn_in,
                                  thinning, count));
  if (!(init_p >= 0.0 && init_p <= 1.0)) throw ConfigError(fmt::format("init_p must lie in [0, 1], got {}", init_p));
}

Graph er_init(int n, double p, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError(fmt::format("edge probability must lie in [0, 1], got {}", p));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (unif(rng) < p) g.set_edge(i, j, true);
  return g;
}

double toggle_delta(const Graph& g, int i, int j, const Eigen::VectorXd& theta, const ModelSpec& spec) {
  const double added = theta.dot(change_stats(g, i, j, spec));
  return g.has_edge(i, j) ? -added : added;
}

MetropolisChain::MetropolisChain(Graph start, Eigen::VectorXd theta, ModelSpec spec, std::uint64_t seed, bool gibbs)
    : g_(std::move(start)),
      theta_(std::move(theta)),
      spec_(std::move(spec)),
      rng_(seed),
      gibbs_(gibbs),
      node_(0, g_.size() - 1) {
  if (g_.size() < 2) throw ConfigError("the sampler needs at least two nodes");
  spec_.validate(g_.size());
  check_theta(theta_, spec_);
}

void MetropolisChain::step() {
  const int i = node_(rng_);
  int j = node_(rng_);
  while (j == i) j = node_(rng_);
  ++proposals_;
  const double delta = toggle_delta(g_, i, j, theta_, spec_);
  bool flip;
  if (gibbs_) {
    // Heat bath: the dyad is on with probability sigmoid(change of Q on adding it).
    const double on_gain = g_.has_edge(i, j) ? -delta : delta;
    const bool want_on = unif_(rng_) < 1.0 / (1.0 + std::exp(-on_gain));
    flip = want_on != g_.has_edge(i, j);
  } else {
    flip = delta >= 0.0 || unif_(rng_) < std::exp(delta);
  }
  if (flip) {
    g_.toggle(i, j);
    ++accepted_;
  }
}

void MetropolisChain::run(long long steps) {
  for (long long s = 0; s < steps; ++s) step();
}

void run_sampler(int n, const Eigen::VectorXd& theta, const ModelSpec& spec, const SamplerConfig& cfg,
                 const std::function<void(const Graph&)>& visit) {
  const SamplerConfig c = cfg.resolved(n, theta);
  c.validate();
  // The starting graph and the chain draw from separate streams of the seed.
  Rng init_rng(derive_seed(c.seed, 0, 0));
  MetropolisChain chain(er_init(n, c.init_p, init_rng), theta, spec, derive_seed(c.seed, 0, 1), c.gibbs);
  chain.run(c.burn_in);
  for (long long s = 0; s < c.count; ++s) {
    if (s > 0) chain.run(c.thinning);
    visit(chain.state());
  }
}

std::vector<Graph> metropolis_sample(int n, const Eigen::VectorXd& theta, const ModelSpec& spec,
                                     const SamplerConfig& cfg) {
  std::vector<Graph> out;
  out.reserve(static_cast<std::size_t>(std::max(0LL, cfg.count)));
  run_sampler(n, theta, spec, cfg, [&](const Graph& g) { out.push_back(g); });
  return out;
}

DegeneracyReport degeneracy_report(const std::vector<Graph>& samples) {
  if (samples.empty()) throw ConfigError("degeneracy report needs at least one sample");
  const ModelSpec spec = ModelSpec::edge_triangle();
  DegeneracyReport r;
  r.samples = static_cast<long long>(samples.size());
  double e1 = 0.0, e2 = 0.0, t1 = 0.0, t2 = 0.0;
  long long empty = 0, full = 0;
  for (const Graph& g : samples) {
    const double d = g.size() > 1 ? g.density() : 0.0;
    if (d < 0.05) ++empty;
    if (d > 0.95) ++full;
    const Eigen::VectorXd s = stats_vector(g, spec);
    e1 += s[0];
    e2 += s[0] * s[0];
    t1 += s[1];
    t2 += s[1] * s[1];
  }
  const double m = static_cast<double>(r.samples);
  r.near_empty_fraction = empty / m;
  r.near_complete_fraction = full / m;
  r.extreme_fraction = (empty + full) / m;
  r.edge_mean = e1 / m;
  r.edge_var = std::max(0.0, e2 / m - r.edge_mean * r.edge_mean);
  r.triangle_mean = t1 / m;
  r.triangle_var = std::max(0.0, t2 / m - r.triangle_mean * r.triangle_mean);
  r.almost_fully_connected = r.near_complete_fraction > 0.5;
  return r;
}

}  // namespace vrbea
