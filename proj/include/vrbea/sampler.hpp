#pragma once

// Single-dyad Metropolis sampler for the ERGM exp(Q(theta | g)).

#include "vrbea/model.hpp"
#include "vrbea/rng.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <vector>

namespace vrbea {

struct SamplerConfig {
  /// Toggles before the first retained state; negative selects 1e5 * n.
  long long burn_in = -1;
  /// Toggles between retained states; negative selects 10 * n.
  long long thinning = -1;
  long long count = 1;
  /// Erdos-Renyi starting density; negative selects sigmoid(theta_1).
  double init_p = -1.0;
  std::uint64_t seed = 0;
  /// Heat-bath update of the proposed dyad instead of a Metropolis flip.
  bool gibbs = false;

  /// Copy with the automatic fields filled in for a given n and theta.
  SamplerConfig resolved(int n, const Eigen::VectorXd& theta) const;
  void validate() const;
};

Graph er_init(int n, double p, Rng& rng);

/// Q(theta | g with dyad ij flipped) - Q(theta | g).
double toggle_delta(const Graph& g, int i, int j, const Eigen::VectorXd& theta, const ModelSpec& spec);

class MetropolisChain {
 public:
  MetropolisChain(Graph start, Eigen::VectorXd theta, ModelSpec spec, std::uint64_t seed, bool gibbs = false);

  /// One proposal on a uniformly drawn ordered pair i != j.
  void step();
  void run(long long steps);

  const Graph& state() const { return g_; }
  long long proposals() const { return proposals_; }
  long long accepted() const { return accepted_; }

 private:
  Graph g_;
  Eigen::VectorXd theta_;
  ModelSpec spec_;
  Rng rng_;
  bool gibbs_;
  std::uniform_int_distribution<int> node_;
  std::uniform_real_distribution<double> unif_{0.0, 1.0};
  long long proposals_ = 0;
  long long accepted_ = 0;
};

/// Runs burn-in then hands every `thinning`-th state to `visit`.
void run_sampler(int n, const Eigen::VectorXd& theta, const ModelSpec& spec, const SamplerConfig& cfg,
                 const std::function<void(const Graph&)>& visit);
std::vector<Graph> metropolis_sample(int n, const Eigen::VectorXd& theta, const ModelSpec& spec,
                                     const SamplerConfig& cfg);

struct DegeneracyReport {
  long long samples = 0;
  double near_empty_fraction = 0.0;     // density < 0.05
  double near_complete_fraction = 0.0;  // density > 0.95
  double extreme_fraction = 0.0;
  double edge_mean = 0.0;
  double edge_var = 0.0;
  double triangle_mean = 0.0;
  double triangle_var = 0.0;
  /// More than half of the samples are near-complete.
  bool almost_fully_connected = false;
};

/// Edge and triangle moments use the scaled statistics of graph_stats.
DegeneracyReport degeneracy_report(const std::vector<Graph>& samples);

}  // namespace vrbea
