#pragma once

// Result and trace types shared by every estimator.

#include "vrbea/model.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace vrbea {

struct TraceRow {
  int t = 0;
  Eigen::VectorXd theta;
  double F = 0.0;
  double q_hat = 0.0;
  double lambda = 0.0;
  double delta_norm_sq = 0.0;
  double K_t = 0.0;
  double Phi = 0.0;
};

struct OuterTrace {
  std::vector<TraceRow> rows;

  /// Columns: method,t,theta_1..theta_d,F,q_hat,lambda,delta_norm_sq,K_t,Phi_t.
  void write_csv(std::ostream& out, const std::string& method) const;
};

struct EstimationResult {
  std::string method;
  Eigen::VectorXd theta_hat;
  std::optional<MeanField> mu_final;
  OuterTrace trace;
  /// Standard errors when the method provides them (MPLE).
  Eigen::VectorXd std_errors;
  /// Diagnostic booleans, e.g. "nonfinite", "separation", "degenerate".
  std::map<std::string, bool> flags;
  /// Scalar diagnostics, e.g. iteration counts.
  std::map<std::string, double> diagnostics;
  /// Free-text termination reason.
  std::string termination;

  bool flag(const std::string& name) const {
    const auto it = flags.find(name);
    return it != flags.end() && it->second;
  }
};

/// Writes the result as a JSON object (theta_hat, flags, diagnostics, ...).
void write_result_json(std::ostream& out, const EstimationResult& result, const ModelSpec& spec);

}  // namespace vrbea
