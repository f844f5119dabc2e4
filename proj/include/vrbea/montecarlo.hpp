#pragma once

// Replication harness: sample networks, run estimators, summarize.
//
// Seeds: replication r uses derive_seed(seed, r, 0) for the network,
// derive_seed(seed, r, 1) for the initial perturbation and
// derive_seed(seed, r, 2 + e) for estimator e (vrbea 0, mz 1, mple 2,
// mcmc_mle 3). Adding replications never changes existing ones.

#include "vrbea/baselines.hpp"
#include "vrbea/bilevel.hpp"
#include "vrbea/model.hpp"
#include "vrbea/sampler.hpp"

#include <nlohmann/json.hpp>

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace vrbea {

enum class Estimator { vrbea, mz, mple, mcmc_mle };

Estimator parse_estimator(std::string_view name);
std::string_view to_string(Estimator e);
std::vector<Estimator> parse_estimators(std::string_view list);

struct McDesign {
  int n = 50;
  ModelSpec spec = ModelSpec::edge_triangle();
  Eigen::VectorXd truth;
  int R = 50;
  std::vector<Estimator> estimators{Estimator::vrbea};
  /// Initial values are truth + U[-c, c] per coordinate.
  double perturbation = 0.0;
  SamplerConfig sampler;
  OuterConfig vrbea;
  MzConfig mz;
  MpleConfig mple;
  McmcMleConfig mcmc;
  std::uint64_t seed = 0;
  int jobs = 1;

  void validate() const;
};

struct ReplicationRecord {
  int rep = 0;
  Estimator estimator = Estimator::vrbea;
  bool failed = false;
  std::string status;
  double density = 0.0;
  Eigen::VectorXd theta0;
  Eigen::VectorXd theta_hat;
  /// Terminal F and q_hat (vrbea only, NaN otherwise).
  double F_final = 0.0;
  double q_hat_final = 0.0;
  /// Median inner iterations (mz only, NaN otherwise).
  double inner_iterations = 0.0;
  std::vector<std::string> flags;
  /// Wall time of the estimator; reported on stdout, never written to files.
  double seconds = 0.0;
};

struct ParamSummary {
  std::string estimator;
  std::string param;
  double truth = 0.0;
  int count = 0;
  int failed = 0;
  double mean = 0.0;
  double bias = 0.0;  // |mean - truth|
  double median = 0.0;
  double mad = 0.0;  // mean |theta_hat - truth|
  double se = 0.0;   // sample standard deviation, 0 when count < 2
  double q05 = 0.0;
  double q95 = 0.0;
  double sign_recovery = 0.0;  // percent
  int outliers = 0;            // |theta_hat| > 1000
  double trimmed_mean = 0.0;
  double trimmed_bias = 0.0;
  double trimmed_se = 0.0;
  double variance = 0.0;
};

inline constexpr double kOutlierBound = 1000.0;

/// Summary of one parameter over a nonempty estimate list.
ParamSummary summarize(const std::vector<double>& estimates, double truth);

struct McResult {
  std::vector<ReplicationRecord> records;  // sorted by (rep, estimator order)
  std::vector<ParamSummary> summary;       // estimator-major, parameter-minor
};

McResult run_design(const McDesign& design);
std::vector<ParamSummary> summarize_records(const McDesign& design, const std::vector<ReplicationRecord>& records);

struct PathRow {
  double value = 0.0;
  std::string param;
  ParamSummary summary;
  double mean_F = 0.0;
  double mean_q_hat = 0.0;
};

/// VRBEA summaries per epsilon; every grid point reuses the same networks.
std::vector<PathRow> sweep_regularization(const McDesign& design, const std::vector<double>& eps_grid);
/// VRBEA summaries and terminal F / q_hat means per eta.
std::vector<PathRow> sweep_eta(const McDesign& design, const std::vector<double>& eta_grid);

void write_summary_csv(const std::filesystem::path& path, const std::vector<ParamSummary>& rows);
void write_replications_csv(const std::filesystem::path& path, const McDesign& design,
                            const std::vector<ReplicationRecord>& records);
void write_path_csv(const std::filesystem::path& path, const std::string& grid_name, const std::vector<PathRow>& rows);
/// hist_<param>.csv with `bins` equal-width bins over the non-outlier range.
void write_histograms(const std::filesystem::path& dir, const McDesign& design,
                      const std::vector<ReplicationRecord>& records, int bins = 40);
/// Column documentation of every file written by this module.
nlohmann::ordered_json output_columns();

/// Summary table in the layout of bias / mean / median / MAD / se rows.
std::string format_table(const std::vector<ParamSummary>& rows);

}  // namespace vrbea
