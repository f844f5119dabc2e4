#include "vrbea/montecarlo.hpp"

#include "vrbea/errors.hpp"
#include "vrbea/graph_stats.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

namespace vrbea {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) { return fmt::format("{}", v); }

int estimator_index(Estimator e) { return static_cast<int>(e); }

// Type-7 sample quantile of sorted data.
double quantile(const std::vector<double>& sorted, double p) {
  if (sorted.size() == 1) return sorted.front();
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

void mean_sd(const std::vector<double>& v, double& mean, double& sd) {
  mean = 0.0;
  sd = 0.0;
  if (v.empty()) return;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (v.size() < 2) return;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
}

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError(fmt::format("cannot write '{}'", path.string()));
  return out;
}

}  // namespace

Estimator parse_estimator(std::string_view name) {
  if (name == "vrbea") return Estimator::vrbea;
  if (name == "mz") return Estimator::mz;
  if (name == "mple") return Estimator::mple;
  if (name == "mcmc_mle") return Estimator::mcmc_mle;
  throw ConfigError(fmt::format("unknown estimator '{}' (expected vrbea, mz, mple or mcmc_mle)", name));
}

std::string_view to_string(Estimator e) {
  switch (e) {
    case Estimator::vrbea: return "vrbea";
    case Estimator::mz: return "mz";
    case Estimator::mple: return "mple";
    case Estimator::mcmc_mle: return "mcmc_mle";
  }
  return "unknown";
}

std::vector<Estimator> parse_estimators(std::string_view list) {
  std::vector<Estimator> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = list.find(',', start);
    std::string_view item = list.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) {
      const Estimator e = parse_estimator(item);
      if (std::find(out.begin(), out.end(), e) != out.end())
        throw ConfigError(fmt::format("estimator '{}' listed twice", item));
      out.push_back(e);
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

void McDesign::validate() const {
  if (n < 2) throw ConfigError(fmt::format("n must be at least 2, got {}", n));
  spec.validate(n);
  check_theta(truth, spec);
  if (R < 1) throw ConfigError(fmt::format("R must be at least 1, got {}", R));
  if (estimators.empty()) throw ConfigError("the estimator list is empty");
  if (!(perturbation >= 0.0)) throw ConfigError(fmt::format("perturbation must be nonnegative, got {}", perturbation));
  if (jobs < 1) throw ConfigError(fmt::format("jobs must be at least 1, got {}", jobs));
  sampler.resolved(n, truth).validate();
  Eigen::VectorXd probe = truth;
  for (Estimator e : estimators) {
    switch (e) {
      case Estimator::vrbea: {
        OuterConfig c = vrbea;
        c.theta0 = probe;
        c.validate(spec);
        break;
      }
      case Estimator::mz: {
        MzConfig c = mz;
        c.theta0 = probe;
        c.validate(spec);
        break;
      }
      case Estimator::mple: mple.validate(); break;
      case Estimator::mcmc_mle: {
        McmcMleConfig c = mcmc;
        c.theta0 = probe;
        c.validate(spec);
        break;
      }
    }
  }
}

ParamSummary summarize(const std::vector<double>& estimates, double truth) {
  if (estimates.empty()) throw ConfigError("summarize needs at least one estimate");
  ParamSummary s;
  s.truth = truth;
  s.count = static_cast<int>(estimates.size());
  double sd = 0.0;
  mean_sd(estimates, s.mean, sd);
  s.se = sd;
  s.variance = sd * sd;
  s.bias = std::abs(s.mean - truth);
  std::vector<double> sorted = estimates;
  std::sort(sorted.begin(), sorted.end());
  s.median = quantile(sorted, 0.5);
  s.q05 = quantile(sorted, 0.05);
  s.q95 = quantile(sorted, 0.95);
  std::vector<double> trimmed;
  int agree = 0;
  double abs_dev = 0.0;
  for (double x : estimates) {
    abs_dev += std::abs(x - truth);
    if (sign_of(x) == sign_of(truth)) ++agree;
    if (std::abs(x) > kOutlierBound)
      ++s.outliers;
    else
      trimmed.push_back(x);
  }
  s.mad = abs_dev / s.count;
  s.sign_recovery = 100.0 * agree / s.count;
  if (trimmed.empty()) {
    s.trimmed_mean = s.trimmed_bias = s.trimmed_se = kNaN;
  } else {
    mean_sd(trimmed, s.trimmed_mean, s.trimmed_se);
    s.trimmed_bias = std::abs(s.trimmed_mean - truth);
  }
  return s;
}

namespace {

std::vector<ReplicationRecord> run_replication(const McDesign& d, int rep) {
  const std::uint64_t r = static_cast<std::uint64_t>(rep);
  SamplerConfig sc = d.sampler;
  sc.seed = derive_seed(d.seed, r, 0);
  sc.count = 1;
  const Graph g = metropolis_sample(d.n, d.truth, d.spec, sc).front();

  Eigen::VectorXd theta0 = d.truth;
  if (d.perturbation > 0.0) {
    Rng rng(derive_seed(d.seed, r, 1));
    std::uniform_real_distribution<double> unif(-d.perturbation, d.perturbation);
    for (Eigen::Index k = 0; k < theta0.size(); ++k) theta0[k] += unif(rng);
  }

  std::vector<ReplicationRecord> out;
  for (Estimator e : d.estimators) {
    ReplicationRecord rec;
    rec.rep = rep;
    rec.estimator = e;
    rec.density = g.density();
    rec.theta0 = theta0;
    rec.F_final = kNaN;
    rec.q_hat_final = kNaN;
    rec.inner_iterations = kNaN;
    const std::uint64_t seed = derive_seed(d.seed, r, 2 + static_cast<std::uint64_t>(estimator_index(e)));
    const auto start = std::chrono::steady_clock::now();
    try {
      EstimationResult res;
      switch (e) {
        case Estimator::vrbea: {
          OuterConfig c = d.vrbea;
          c.theta0 = theta0;
          c.seed = seed;
          res = vrbea_estimate(g, d.spec, c);
          if (!res.trace.rows.empty()) {
            rec.F_final = res.trace.rows.back().F;
            rec.q_hat_final = res.trace.rows.back().q_hat;
          }
          break;
        }
        case Estimator::mz: {
          MzConfig c = d.mz;
          c.theta0 = theta0;
          c.seed = seed;
          res = mz_estimate(g, d.spec, c);
          rec.inner_iterations = res.diagnostics.at("inner_iterations_median");
          break;
        }
        case Estimator::mple: res = mple_estimate(g, d.spec, d.mple); break;
        case Estimator::mcmc_mle: {
          McmcMleConfig c = d.mcmc;
          c.theta0 = theta0;
          c.seed = seed;
          res = mcmc_mle_estimate(g, d.spec, c);
          break;
        }
      }
      rec.theta_hat = res.theta_hat;
      rec.status = res.termination;
      for (const auto& [name, on] : res.flags)
        if (on) rec.flags.push_back(name);
      rec.failed = !res.theta_hat.allFinite() || res.flag("nonfinite");
    } catch (const std::exception& ex) {
      rec.failed = true;
      rec.status = ex.what();
      rec.theta_hat = Eigen::VectorXd::Constant(d.spec.dim(), kNaN);
    }
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace

std::vector<ParamSummary> summarize_records(const McDesign& design, const std::vector<ReplicationRecord>& records) {
  std::vector<ParamSummary> out;
  for (Estimator e : design.estimators) {
    for (int k = 0; k < design.spec.dim(); ++k) {
      std::vector<double> values;
      int failed = 0;
      for (const ReplicationRecord& rec : records) {
        if (rec.estimator != e) continue;
        if (rec.failed)
          ++failed;
        else
          values.push_back(rec.theta_hat[k]);
      }
      ParamSummary s;
      if (values.empty()) {
        s.truth = design.truth[k];
        s.mean = s.bias = s.median = s.mad = s.se = s.q05 = s.q95 = kNaN;
        s.trimmed_mean = s.trimmed_bias = s.trimmed_se = s.variance = kNaN;
      } else {
        s = summarize(values, design.truth[k]);
      }
      s.estimator = std::string(to_string(e));
      s.param = std::string(to_string(design.spec.kinds[k]));
      s.failed = failed;
      out.push_back(std::move(s));
    }
  }
  return out;
}

McResult run_design(const McDesign& design) {
  design.validate();
  std::vector<std::vector<ReplicationRecord>> slots(design.R);
  std::atomic<int> next{0};
  const auto worker = [&]() {
    for (int rep = next++; rep < design.R; rep = next++) slots[rep] = run_replication(design, rep);
  };
  const int workers = std::min(design.jobs, design.R);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  McResult result;
  for (auto& slot : slots)
    for (auto& rec : slot) result.records.push_back(std::move(rec));
  result.summary = summarize_records(design, result.records);
  return result;
}

namespace {

std::vector<PathRow> vrbea_path(const McDesign& design, const std::vector<double>& grid, bool eta) {
  if (grid.empty()) throw ConfigError("the sweep grid is empty");
  std::vector<PathRow> rows;
  for (double value : grid) {
    McDesign d = design;
    d.estimators = {Estimator::vrbea};
    if (eta)
      d.vrbea.eta = value;
    else
      d.vrbea.lower.epsilon = value;
    const McResult res = run_design(d);
    double F = 0.0, q = 0.0;
    int ok = 0;
    for (const ReplicationRecord& rec : res.records) {
      if (rec.failed) continue;
      F += rec.F_final;
      q += rec.q_hat_final;
      ++ok;
    }
    for (const ParamSummary& s : res.summary) {
      PathRow row;
      row.value = value;
      row.param = s.param;
      row.summary = s;
      row.mean_F = ok ? F / ok : kNaN;
      row.mean_q_hat = ok ? q / ok : kNaN;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace

std::vector<PathRow> sweep_regularization(const McDesign& design, const std::vector<double>& eps_grid) {
  return vrbea_path(design, eps_grid, false);
}

std::vector<PathRow> sweep_eta(const McDesign& design, const std::vector<double>& eta_grid) {
  return vrbea_path(design, eta_grid, true);
}

void write_summary_csv(const std::filesystem::path& path, const std::vector<ParamSummary>& rows) {
  std::ofstream out = open_output(path);
  out << "estimator,param,truth,count,failed,bias,mean,median,MAD,se,q05,q95,sign_recovery_pct,outliers,"
         "trimmed_mean,trimmed_bias,trimmed_se\n";
  for (const ParamSummary& s : rows)
    out << s.estimator << ',' << s.param << ',' << num(s.truth) << ',' << s.count << ',' << s.failed << ','
        << num(s.bias) << ',' << num(s.mean) << ',' << num(s.median) << ',' << num(s.mad) << ',' << num(s.se) << ','
        << num(s.q05) << ',' << num(s.q95) << ',' << num(s.sign_recovery) << ',' << s.outliers << ','
        << num(s.trimmed_mean) << ',' << num(s.trimmed_bias) << ',' << num(s.trimmed_se) << '\n';
}

void write_replications_csv(const std::filesystem::path& path, const McDesign& design,
                            const std::vector<ReplicationRecord>& records) {
  std::ofstream out = open_output(path);
  const int d = design.spec.dim();
  out << "rep,estimator,failed,density";
  for (int k = 1; k <= d; ++k) out << ",theta0_" << k;
  for (int k = 1; k <= d; ++k) out << ",theta_hat_" << k;
  out << ",F_final,q_hat_final,inner_iterations,flags,status\n";
  for (const ReplicationRecord& r : records) {
    out << r.rep << ',' << to_string(r.estimator) << ',' << (r.failed ? 1 : 0) << ',' << num(r.density);
    for (int k = 0; k < d; ++k) out << ',' << num(r.theta0[k]);
    for (int k = 0; k < d; ++k) out << ',' << num(r.theta_hat[k]);
    std::string flags;
    for (const std::string& f : r.flags) flags += (flags.empty() ? "" : ";") + f;
    std::string status = r.status;
    std::replace(status.begin(), status.end(), '"', '\'');
    out << ',' << num(r.F_final) << ',' << num(r.q_hat_final) << ',' << num(r.inner_iterations) << ',' << flags
        << ",\"" << status << "\"\n";
  }
}

void write_path_csv(const std::filesystem::path& path, const std::string& grid_name, const std::vector<PathRow>& rows) {
  std::ofstream out = open_output(path);
  out << grid_name << ",param,count,failed,mean,variance,bias,se,sign_recovery_pct,outliers,mean_F,mean_q_hat\n";
  for (const PathRow& r : rows) {
    const ParamSummary& s = r.summary;
    out << num(r.value) << ',' << r.param << ',' << s.count << ',' << s.failed << ',' << num(s.mean) << ','
        << num(s.variance) << ',' << num(s.bias) << ',' << num(s.se) << ',' << num(s.sign_recovery) << ','
        << s.outliers << ',' << num(r.mean_F) << ',' << num(r.mean_q_hat) << '\n';
  }
}

void write_histograms(const std::filesystem::path& dir, const McDesign& design,
                      const std::vector<ReplicationRecord>& records, int bins) {
  if (bins < 1) throw ConfigError("histograms need at least one bin");
  for (int k = 0; k < design.spec.dim(); ++k) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const ReplicationRecord& r : records) {
      if (r.failed || std::abs(r.theta_hat[k]) > kOutlierBound) continue;
      lo = std::min(lo, r.theta_hat[k]);
      hi = std::max(hi, r.theta_hat[k]);
    }
    if (!(lo <= hi)) lo = hi = design.truth[k];
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double width = (hi - lo) / bins;
    std::ofstream out = open_output(dir / fmt::format("hist_{}.csv", to_string(design.spec.kinds[k])));
    out << "estimator,bin,lo,hi,count\n";
    for (Estimator e : design.estimators) {
      std::vector<int> counts(bins, 0);
      for (const ReplicationRecord& r : records) {
        if (r.estimator != e || r.failed || std::abs(r.theta_hat[k]) > kOutlierBound) continue;
        const int b = std::clamp(static_cast<int>((r.theta_hat[k] - lo) / width), 0, bins - 1);
        ++counts[b];
      }
      for (int b = 0; b < bins; ++b)
        out << to_string(e) << ',' << b << ',' << num(lo + b * width) << ',' << num(lo + (b + 1) * width) << ','
            << counts[b] << '\n';
    }
  }
}

nlohmann::ordered_json output_columns() {
  nlohmann::ordered_json j;
  j["summary.csv"] = {
      {"estimator", "estimator name"},
      {"param", "statistic the parameter multiplies"},
      {"truth", "true parameter value"},
      {"count", "successful replications"},
      {"failed", "failed replications (excluded from moments)"},
      {"bias", "|mean - truth|"},
      {"mean", "mean estimate"},
      {"median", "median estimate"},
      {"MAD", "mean absolute deviation from truth"},
      {"se", "sample standard deviation of the estimates"},
      {"q05", "5% empirical quantile"},
      {"q95", "95% empirical quantile"},
      {"sign_recovery_pct", "percent of estimates with the sign of truth"},
      {"outliers", "estimates with |value| > 1000"},
      {"trimmed_mean", "mean without outliers"},
      {"trimmed_bias", "|trimmed_mean - truth|"},
      {"trimmed_se", "standard deviation without outliers"}};
  j["replications.csv"] = {
      {"rep", "replication index"},
      {"estimator", "estimator name"},
      {"failed", "1 when the run failed or produced a non-finite estimate"},
      {"density", "edge density of the sampled network"},
      {"theta0_k", "initial value of parameter k"},
      {"theta_hat_k", "estimate of parameter k"},
      {"F_final", "terminal upper-level value (vrbea)"},
      {"q_hat_final", "terminal value-function surrogate (vrbea)"},
      {"inner_iterations", "median fixed-point inner iterations (mz)"},
      {"flags", "raised diagnostic flags separated by ';'"},
      {"status", "termination message"}};
  const auto path_columns = [](const char* grid, const char* meaning) {
    return nlohmann::ordered_json{{grid, meaning},
                                  {"param", "statistic"},
                                  {"count", "successful replications"},
                                  {"failed", "failed replications"},
                                  {"mean", "mean estimate"},
                                  {"variance", "sample variance of the estimates"},
                                  {"bias", "|mean - truth|"},
                                  {"se", "sample standard deviation"},
                                  {"sign_recovery_pct", "percent with the sign of truth"},
                                  {"outliers", "estimates with |value| > 1000"},
                                  {"mean_F", "mean terminal F_n"},
                                  {"mean_q_hat", "mean terminal q_hat"}};
  };
  j["path_eps.csv"] = path_columns("eps", "lower-level regularization");
  j["path_eta.csv"] = path_columns("eta", "barrier speed parameter");
  j["hist_<param>.csv"] = {{"estimator", "estimator name"},
                           {"bin", "bin index"},
                           {"lo", "lower bin edge"},
                           {"hi", "upper bin edge"},
                           {"count", "estimates in [lo, hi), outliers and failures excluded"}};
  return j;
}

std::string format_table(const std::vector<ParamSummary>& rows) {
  std::ostringstream out;
  out << fmt::format("{:<10} {:<10} {:>10} {:>10} {:>10} {:>10} {:>10} {:>8} {:>6}\n", "estimator", "param", "bias",
                     "mean", "median", "MAD", "se", "sign%", "out");
  for (const ParamSummary& s : rows)
    out << fmt::format("{:<10} {:<10} {:>10.4f} {:>10.4f} {:>10.4f} {:>10.4f} {:>10.4f} {:>8.2f} {:>6}\n", s.estimator,
                       s.param, s.bias, s.mean, s.median, s.mad, s.se, s.sign_recovery, s.outliers);
  return out.str();
}

}  // namespace vrbea
