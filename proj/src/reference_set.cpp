#include "dea/reference_set.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "dea/error.hpp"

namespace dea {

using solver::LinearProgram;
using solver::Relation;
using solver::Term;

Model15Solution solve_model15(const Dataset& d, const EfficientSet& efficient,
                              std::span<const double> target_inputs,
                              std::span<const double> target_outputs,
                              const AnalysisConfig& cfg) {
  const std::size_t t = efficient.size(), m = d.num_inputs(), s = d.num_outputs();
  if (target_inputs.size() != m || target_outputs.size() != s) {
    throw std::invalid_argument("target dimensions do not match the dataset");
  }
  if (t == 0) throw AnalysisError("empty efficient set");

  // Columns: alpha_0..alpha_t then beta_0..beta_t. Column t is the target.
  LinearProgram lp(solver::Sense::Maximize);
  for (std::size_t k = 0; k <= t; ++k) lp.add_variable(0.0, 1.0, 1.0);
  for (std::size_t k = 0; k <= t; ++k) lp.add_variable(0.0, solver::kInfinity);
  auto both = [&](std::vector<Term>& row, std::size_t k, double coeff) {
    row.push_back({k, coeff});
    row.push_back({t + 1 + k, coeff});
  };
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<Term> row;
    for (std::size_t k = 0; k < t; ++k) both(row, k, d[efficient[k]].inputs[i]);
    both(row, t, -target_inputs[i]);
    lp.add_constraint(std::move(row), Relation::Equal, 0.0);
  }
  for (std::size_t r = 0; r < s; ++r) {
    std::vector<Term> row;
    for (std::size_t k = 0; k < t; ++k) both(row, k, d[efficient[k]].outputs[r]);
    both(row, t, -target_outputs[r]);
    lp.add_constraint(std::move(row), Relation::Equal, 0.0);
  }
  std::vector<Term> scale;
  for (std::size_t k = 0; k < t; ++k) both(scale, k, 1.0);
  both(scale, t, -1.0);
  lp.add_constraint(std::move(scale), Relation::Equal, 0.0);

  const solver::Solution sol = solver::solve_lp(lp, cfg.solver);
  if (sol.status == solver::SolveStatus::IterationLimit) {
    throw SolverLimitError("reference-set LP hit the iteration limit", "");
  }
  if (!sol.optimal()) {
    throw AnalysisError("reference-set LP returned " + std::string(solver::to_string(sol.status)));
  }
  Model15Solution out;
  out.alpha.assign(sol.values.begin(), sol.values.begin() + static_cast<std::ptrdiff_t>(t + 1));
  out.beta.assign(sol.values.begin() + static_cast<std::ptrdiff_t>(t + 1), sol.values.end());
  out.objective = sol.objective_value;
  return out;
}

std::vector<double> recover_lambda_max(const Model15Solution& sol, const AnalysisConfig& cfg) {
  if (sol.alpha.empty() || sol.alpha.size() != sol.beta.size()) {
    throw std::invalid_argument("malformed reference-set solution");
  }
  const std::size_t t = sol.alpha.size() - 1;
  const double scale = sol.alpha[t] + sol.beta[t];
  if (scale < 1.0 - cfg.solver.feas_tol) {
    throw AnalysisError("reference-set LP lost the target column (scale " + std::to_string(scale) +
                        ")");
  }
  std::vector<double> lambda(t);
  for (std::size_t k = 0; k < t; ++k) lambda[k] = std::max(0.0, (sol.alpha[k] + sol.beta[k]) / scale);
  return lambda;
}

McrsResult identify_mcrs(const Dataset& d, const EfficientSet& efficient,
                         const Projection& projection, const AnalysisConfig& cfg) {
  McrsResult out;
  out.dmu = projection.dmu;
  const Model15Solution sol =
      solve_model15(d, efficient, projection.target_inputs, projection.target_outputs, cfg);
  out.lambda_max = recover_lambda_max(sol, cfg);

  const double zero = cfg.solver.zero_tol;
  for (std::size_t k = 0; k < efficient.size(); ++k) {
    const double v = out.lambda_max[k];
    if (v > zero) {
      out.members.push_back(efficient[k]);
    } else if (v > cfg.borderline_tol) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.3g", v);
      out.warnings.push_back("'" + d[efficient[k]].name + "' has borderline weight " + buf +
                             " in the reference set of '" + d[projection.dmu].name + "'");
    }
  }
  for (std::size_t k = 0; k < projection.reference_lambda.size(); ++k) {
    if (projection.reference_lambda[k] > zero) out.ucrs.push_back(efficient[k]);
  }
  return out;
}

}  // namespace dea
