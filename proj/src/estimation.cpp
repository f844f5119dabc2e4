#include "vrbea/estimation.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <ostream>

namespace vrbea {

namespace {

// Shortest representation that round-trips.
std::string num(double v) { return fmt::format("{}", v); }

nlohmann::json to_json(const Eigen::VectorXd& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

}  // namespace

void OuterTrace::write_csv(std::ostream& out, const std::string& method) const {
  const Eigen::Index d = rows.empty() ? 0 : rows.front().theta.size();
  out << "method,t";
  for (Eigen::Index k = 0; k < d; ++k) out << ",theta_" << (k + 1);
  out << ",F,q_hat,lambda,delta_norm_sq,K_t,Phi_t\n";
  for (const TraceRow& r : rows) {
    out << method << ',' << r.t;
    for (Eigen::Index k = 0; k < d; ++k) out << ',' << num(r.theta[k]);
    out << ',' << num(r.F) << ',' << num(r.q_hat) << ',' << num(r.lambda) << ',' << num(r.delta_norm_sq)
        << ',' << num(r.K_t) << ',' << num(r.Phi) << '\n';
  }
}

void write_result_json(std::ostream& out, const EstimationResult& result, const ModelSpec& spec) {
  nlohmann::ordered_json j;
  j["method"] = result.method;
  j["spec"] = spec.to_string();
  j["theta_hat"] = to_json(result.theta_hat);
  if (result.std_errors.size() > 0) j["std_errors"] = to_json(result.std_errors);
  j["flags"] = nlohmann::json::object();
  for (const auto& [k, v] : result.flags) j["flags"][k] = v;
  j["diagnostics"] = nlohmann::json::object();
  for (const auto& [k, v] : result.diagnostics) j["diagnostics"][k] = v;
  j["termination"] = result.termination;
  j["trace_rows"] = result.trace.rows.size();
  out << j.dump(2) << '\n';
}

}  // namespace vrbea
